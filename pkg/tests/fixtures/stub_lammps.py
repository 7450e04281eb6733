#!/usr/bin/env python3
"""Stand-in for the LAMMPS binary: ``stub -in FILE -log LOG``.

It checks two things a real run would trip over: potential files named by
pair_coeff must exist, and atoms cannot be created before the box.
STUB_SLEEP=<seconds> makes it hang, for timeout tests.
"""

import os
import sys
import time


def main(argv):
    args = dict(zip(argv[1::2], argv[2::2]))
    script = open(args["-in"]).read().splitlines()
    log = open(args.get("-log", "log.lammps"), "w")
    log.write("LAMMPS (stub)\n")
    log.flush()
    if os.environ.get("STUB_SLEEP"):
        time.sleep(float(os.environ["STUB_SLEEP"]))
    have_box = False
    for line in script:
        words = line.split()
        if not words:
            continue
        log.write(line + "\n")
        if words[0] == "create_box":
            have_box = True
        elif words[0] == "create_atoms" and not have_box:
            return fail(log, "Create_atoms command before simulation box is defined", line)
        elif words[0] == "pair_coeff" and len(words) > 3 and not os.path.exists(words[3]):
            return fail(log, f"Cannot open EAM potential file {words[3]}", line)
    log.write("Total wall time: 0:00:00\n")
    return 0


def fail(log, message, line):
    log.write(f"ERROR: {message} (src/stub.cpp:1)\nLast input line: {line}\n")
    print(f"ERROR: {message}")
    return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv))
