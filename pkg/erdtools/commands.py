# MIT License

# Copyright (c) 2021-present The ERDTools Authors

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
"""Class based command line commands.

A :class:`Command` is an object with a ``main`` method and optional hooks;
a :class:`CommandGroup` picks up the commands defined in its class body and
exposes them as argparse subcommands.
"""
from __future__ import annotations

import argparse
import logging
from types import MethodType
from typing import Any, Callable, ClassVar, Dict, List, Optional, Sequence, Type, TypeVar, Union

__all__ = (
    "CommandGroupType",
    "Command",
    "CommandGroup",
    "inject",
)

_log = logging.getLogger(__name__)

T = TypeVar("T", bound=Callable)


def _doc_only(func: T) -> T:
    func.__doc_only__ = None  # type: ignore[attr-defined]
    return func


def _overridden(member: Union[MethodType, Callable]) -> bool:
    func = member.__func__ if isinstance(member, MethodType) else member
    return not hasattr(func, "__doc_only__")


## Types ##

class CommandGroupType(type):
    """This is the metaclass for :class:`CommandGroup`.

    Registers class attributes which are :class:`Command` instances as
    subcommands, walking the MRO so that subclasses may override a
    subcommand by defining one with the same name.

    Internal Workings
    -----------------
    Adds an attribute named ``__subcommands__`` of type ``Dict[str, Command]``
    to the class, in definition order.
    """
    def __new__(mcs, name, bases, attrs, **kwargs):
        subcommands: Dict[str, Command] = {}
        group_cls = super().__new__(mcs, name, bases, attrs, **kwargs)
        for base in reversed(group_cls.__mro__[0:-1]):
            for attr in base.__dict__.values():
                if isinstance(attr, Command):
                    subcommands.pop(attr.name, None)
                    subcommands[attr.name] = attr
        group_cls.__subcommands__ = subcommands
        return group_cls


## Commands ##

class Command:
    """A command line command.

    Subclasses override :meth:`main` and, when they take options,
    :meth:`arguments`. The class docstring becomes the help text and the
    lower-cased class name the command name.

    Attributes
    ----------
    name : :class:`str`
        Name on the command line.
    group : Optional[:class:`CommandGroup`]
        The group the command belongs to.

    Example
    -------
    .. code-block:: python

        class Tool(CommandGroup):
            @inject()
            class Hello(Command):
                \"\"\"Greet someone\"\"\"
                def arguments(self, parser):
                    parser.add_argument("who")

                def main(self, args):
                    print(f"hello {args.who}")
                    return 0

        Tool().run(["hello", "world"])
    """
    group: Optional[CommandGroup]

    def __init__(self, name: Optional[str] = None, help: Optional[str] = None) -> None:
        if not _overridden(self.main):
            raise ValueError(f"{type(self).__name__} must override main")
        self.name = name or type(self).__name__.lower()
        doc = (type(self).__doc__ or "").strip()
        self.description = doc
        self.help = help or (doc.splitlines()[0] if doc else None)
        self.group = None

    def __init_subclass__(cls, **kwargs) -> None:
        # the class docstring doubles as the main docstring
        main_m = cls.__dict__.get("main")
        if main_m is not None and getattr(main_m, "__doc__", None) is None:
            main_m.__doc__ = cls.__doc__
        super().__init_subclass__(**kwargs)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} name={self.name!r}>"

    @property
    def owner(self) -> Optional[CommandGroup]:
        """Optional[:class:`CommandGroup`]: The group that owns the command."""
        return self.group

    @_doc_only
    def arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the options of this command to ``parser``."""

    @_doc_only
    def pre_invoke(self, args: argparse.Namespace) -> Any:
        """Called before :meth:`main`."""

    @_doc_only
    def main(self, args: argparse.Namespace) -> int:
        """The body of the command; returns the exit code."""
        return 0

    @_doc_only
    def post_invoke(self, args: argparse.Namespace) -> Any:
        """Called after :meth:`main` returned."""

    @_doc_only
    def on_error(self, args: argparse.Namespace, error: Exception) -> Optional[int]:
        """Local error handler; returning an exit code marks the error handled."""
        return None

    def invoke(self, args: argparse.Namespace) -> int:
        """Run the hooks and :meth:`main`, routing exceptions to the error handlers.

        Errors go to :meth:`on_error`, then to the group's
        :meth:`CommandGroup.on_subcommand_error`; an error neither handles is re-raised.
        """
        try:
            if self.group is not None:
                self.call_if_overridden(self.group.subcommand_before_invoke, args)
            self.call_if_overridden(self.pre_invoke, args)
            code = self.main(args)
            self.call_if_overridden(self.post_invoke, args)
            if self.group is not None:
                self.call_if_overridden(self.group.subcommand_after_invoke, args)
        except Exception as exc:
            _log.debug("%s raised %r", self.name, exc)
            handled = self.call_if_overridden(self.on_error, args, exc)
            if handled is None and self.group is not None:
                handled = self.call_if_overridden(self.group.on_subcommand_error, args, exc)
            if handled is None:
                raise
            return int(handled)
        return int(code or 0)

    @staticmethod
    def call_if_overridden(member: Union[MethodType, Callable], *args, **kwargs) -> Any:
        if _overridden(member):
            return member(*args, **kwargs)
        return None


class CommandGroup(Command, metaclass=CommandGroupType):
    """Inherits from :class:`Command`.

    Picks up any :class:`Command` instances defined in the class body as
    subcommands. The group's own :meth:`arguments` adds options shared by
    every subcommand, placed before the subcommand name.
    """
    __subcommands__: ClassVar[Dict[str, Command]]

    def __init__(self, name: Optional[str] = None, help: Optional[str] = None) -> None:
        super().__init__(name, help)
        self.commands: Dict[str, Command] = dict(self.__class__.__subcommands__)
        for cmd in self.commands.values():
            cmd.group = self

    @_doc_only
    def subcommand_before_invoke(self, args: argparse.Namespace) -> Any:
        """Called before any subcommand is invoked."""

    @_doc_only
    def subcommand_after_invoke(self, args: argparse.Namespace) -> Any:
        """Called after any subcommand returned."""

    @_doc_only
    def on_subcommand_error(self, args: argparse.Namespace, error: Exception) -> Optional[int]:
        """Invoked when a subcommand raises and its own handler did not handle the error."""
        return None

    def main(self, args: argparse.Namespace) -> int:
        command: Command = args._command
        return command.invoke(args)

    def build_parser(self) -> argparse.ArgumentParser:
        """An :class:`argparse.ArgumentParser` with one subparser per subcommand."""
        parser = argparse.ArgumentParser(prog=self.name, description=self.description)
        self.call_if_overridden(self.arguments, parser)
        subparsers = parser.add_subparsers(title="commands", dest="command", metavar="COMMAND")
        subparsers.required = True
        for cmd in self.commands.values():
            sub = subparsers.add_parser(cmd.name, help=cmd.help, description=cmd.description)
            cmd.call_if_overridden(cmd.arguments, sub)
            sub.set_defaults(_command=cmd)
        return parser

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Parse ``argv`` and invoke the selected subcommand.

        argparse exits with status 2 on usage errors.
        """
        args = self.build_parser().parse_args(argv)
        return self.invoke(args)

    def command(self, *args, **kwargs) -> Callable[[Type[Command]], Command]:
        """This is a Decorator.

        Instantiate a :class:`Command` subclass and register it on this
        instance.

        Raises
        ------
        :exc:`ValueError`
            Used on something that is not a :class:`Command` subclass.
        """
        def decorator(obj: Type[Command]) -> Command:
            if not (isinstance(obj, type) and issubclass(obj, Command)):
                raise ValueError(f"Expected erdtools.commands.Command subclass got {type(obj)}")
            result = obj(*args, **kwargs)
            result.group = self
            self.commands[result.name] = result
            return result
        return decorator

    @property
    def names(self) -> List[str]:
        return list(self.commands)


## Decorators ##

G = TypeVar("G", bound=Command)


def inject(*args, **kwargs) -> Callable[[Type[G]], G]:
    """This is a Decorator.

    Return a class's instance

    Parameters
    ----------
    args
        The positional arguments to use to initialise the class.
    kwargs
        The Key-word arguments to use to initialise the class.

    Raises
    ------
    :exc:`TypeError`
        If a :class:`Command` instance is given instead of a class.

    Example
    -------
    .. code-block:: python

        class Tool(CommandGroup):
            @inject(name="ls")
            class List(Command):
                def main(self, args):
                    return 0
    """
    def decorator(cls: Type[G]) -> G:
        if isinstance(cls, Command):
            raise TypeError("Can not inject a command instance, expected a <class 'type'>")
        return cls(*args, **kwargs)
    return decorator
