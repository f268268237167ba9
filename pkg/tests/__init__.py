from os.path import abspath
from sys import argv
from sys import path as spath

try:
    import erdtools
except ModuleNotFoundError:
    local = True
else:
    local = False
    del erdtools

def load_tests(loader, *args):
    if ("--local" in argv) or local:
        spath.insert(0, abspath("."))
        print("Testing local erdtools package")

    names = ["tests.test_version",
             "tests.test_fock",
             "tests.test_measure",
             "tests.test_info",
             "tests.test_accessible",
             "tests.test_breakdown",
             "tests.test_receivers",
             "tests.test_sweep",
             "tests.test_commands",
             "tests.test_cli"]
    if "--slow" in argv:
        print("Including the slow acceptance checks")
        names.append("tests.test_acceptance")

    return loader.loadTestsFromNames(names)
