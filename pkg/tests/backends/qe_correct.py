import sys

sys.stdin.readline()
sys.stdout.write("(atom ((1 (x 1))) gt)\n")
