"""Regenerates the JSON fixtures in this directory.

Every exercise solution and every generated submission is checked against
CPython before anything is written: valid code must parse, solutions and
non-computation variants must reproduce the examples, computation-error
variants must fail at least one example, and invalid flow cases must be
rejected by the real parser.

    python3 fixtures/generate.py
"""

import ast
import json
import random
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent

IO = ["Basics", "Input and Output"]
ARITH = ["Basics", "Arithmetic"]
COND = ["Control Flow", "Conditionals"]
LOOPS = ["Control Flow", "Loops"]
LISTS = ["Data", "Lists"]
STRINGS = ["Data", "Strings"]
FUNCS = ["Functions"]

# (id, title, category, description, inputs, outputs, solution,
#  requirement-ignoring variant, computation-error variant)
EXERCISES = [
    (
        "hello_name", "Say hello", IO,
        "Read a name and print `Hello, <name>!`. Use an f-string.",
        ["Mina", "Joon"], ["Hello, Mina!", "Hello, Joon!"],
        'name = input()\nprint(f"Hello, {name}!")',
        'name = input()\nprint("Hello, " + name + "!")',
        'name = input()\nprint(f"Hello {name}!")',
    ),
    (
        "echo_twice", "Echo twice", IO,
        "Read one line and print it twice, each on its own line. Use a for loop.",
        ["hi", "ok"], ["hi\nhi", "ok\nok"],
        "line = input()\nfor _ in range(2):\n    print(line)",
        "line = input()\nprint(line)\nprint(line)",
        "line = input()\nfor _ in range(3):\n    print(line)",
    ),
    (
        "sum_two", "Sum of two numbers", ARITH,
        "Read two integers on one line separated by a space and print their sum. "
        "Convert the numbers with `map`.",
        ["1 2", "10 -4"], ["3", "6"],
        "a, b = map(int, input().split())\nprint(a + b)",
        "parts = input().split()\nprint(int(parts[0]) + int(parts[1]))",
        "a, b = map(int, input().split())\nprint(a - b)",
    ),
    (
        "rectangle_area", "Rectangle area", ARITH,
        "Read the width and height of a rectangle on one line and print its area. "
        "Store the area in a variable named `area` before printing it.",
        ["3 4", "5 6"], ["12", "30"],
        "w, h = map(int, input().split())\narea = w * h\nprint(area)",
        "w, h = map(int, input().split())\nprint(w * h)",
        "w, h = map(int, input().split())\narea = 2 * (w + h)\nprint(area)",
    ),
    (
        "celsius_to_fahrenheit", "Celsius to Fahrenheit", ARITH,
        "Read a temperature in Celsius (an integer) and print it in Fahrenheit with one "
        "decimal place. Format the number with an f-string.",
        ["0", "100", "37"], ["32.0", "212.0", "98.6"],
        'c = int(input())\nf = c * 9 / 5 + 32\nprint(f"{f:.1f}")',
        "c = int(input())\nprint(round(c * 1.8 + 32, 1))",
        'c = int(input())\nf = c * 5 / 9 + 32\nprint(f"{f:.1f}")',
    ),
    (
        "quotient_remainder", "Quotient and remainder", ARITH,
        "Read two positive integers a and b and print the quotient and the remainder of "
        "a divided by b, separated by a space. Use `divmod`.",
        ["7 2", "20 6"], ["3 1", "3 2"],
        "a, b = map(int, input().split())\nq, r = divmod(a, b)\nprint(q, r)",
        "a, b = map(int, input().split())\nprint(a // b, a % b)",
        "a, b = map(int, input().split())\nq, r = divmod(b, a)\nprint(q, r)",
    ),
    (
        "even_odd", "Even or odd", COND,
        "Read an integer and print `even` if it is even, otherwise `odd`. Use the `%` operator.",
        ["4", "7"], ["even", "odd"],
        'n = int(input())\nif n % 2 == 0:\n    print("even")\nelse:\n    print("odd")',
        'n = int(input())\nif str(n)[-1] in "02468":\n    print("even")\nelse:\n    print("odd")',
        'n = int(input())\nif n % 2 == 1:\n    print("even")\nelse:\n    print("odd")',
    ),
    (
        "max_of_three", "Largest of three", COND,
        "Read three integers on one line and print the largest. Do not use the built-in "
        "`max`; compare the numbers with `if` statements.",
        ["1 5 3", "9 2 4"], ["5", "9"],
        "a, b, c = map(int, input().split())\nbiggest = a\nif b > biggest:\n    biggest = b\n"
        "if c > biggest:\n    biggest = c\nprint(biggest)",
        "a, b, c = map(int, input().split())\nprint(max(a, b, c))",
        "a, b, c = map(int, input().split())\nbiggest = a\nif b > biggest:\n    biggest = b\n"
        "if c > a:\n    biggest = c\nprint(biggest)",
    ),
    (
        "letter_grade", "Letter grade", COND,
        "Read a score from 0 to 100. Print `A` for 90 or more, `B` for 80 or more, `C` for "
        "70 or more and `F` otherwise. Use `if`, `elif` and `else`.",
        ["90", "83", "40"], ["A", "B", "F"],
        'score = int(input())\nif score >= 90:\n    print("A")\nelif score >= 80:\n    print("B")\n'
        'elif score >= 70:\n    print("C")\nelse:\n    print("F")',
        'score = int(input())\nif score >= 90:\n    print("A")\nelse:\n    if score >= 80:\n'
        '        print("B")\n    else:\n        if score >= 70:\n            print("C")\n'
        '        else:\n            print("F")',
        'score = int(input())\nif score > 90:\n    print("A")\nelif score > 80:\n    print("B")\n'
        'elif score > 70:\n    print("C")\nelse:\n    print("F")',
    ),
    (
        "leap_year", "Leap year", COND,
        "Read a year and print `leap` if it is a leap year, otherwise `common`. Decide with a "
        "single condition that combines `and` and `or`.",
        ["2024", "1900", "2000"], ["leap", "common", "leap"],
        'year = int(input())\nif year % 4 == 0 and (year % 100 != 0 or year % 400 == 0):\n'
        '    print("leap")\nelse:\n    print("common")',
        'year = int(input())\nif year % 400 == 0:\n    print("leap")\nelif year % 100 == 0:\n'
        '    print("common")\nelif year % 4 == 0:\n    print("leap")\nelse:\n    print("common")',
        'year = int(input())\nif year % 4 == 0:\n    print("leap")\nelse:\n    print("common")',
    ),
    (
        "number_sign", "Sign of a number", COND,
        "Read an integer and print `positive`, `negative` or `zero`. Use `if`, `elif` and `else`.",
        ["5", "-3", "0"], ["positive", "negative", "zero"],
        'n = int(input())\nif n > 0:\n    print("positive")\nelif n < 0:\n    print("negative")\n'
        'else:\n    print("zero")',
        'n = int(input())\nprint(["zero", "positive", "negative"][(n > 0) + 2 * (n < 0)])',
        'n = int(input())\nif n >= 0:\n    print("positive")\nelif n < 0:\n    print("negative")\n'
        'else:\n    print("zero")',
    ),
    (
        "ticket_price", "Ticket price", COND,
        "Read an age. Children under 7 ride free, ages 7 to 18 pay 500 and everyone else pays "
        "1000. Store the result in a variable named `price` and print it.",
        ["5", "18", "30"], ["0", "500", "1000"],
        "age = int(input())\nif age < 7:\n    price = 0\nelif age <= 18:\n    price = 500\n"
        "else:\n    price = 1000\nprint(price)",
        "age = int(input())\nif age < 7:\n    print(0)\nelif age <= 18:\n    print(500)\n"
        "else:\n    print(1000)",
        "age = int(input())\nif age < 7:\n    price = 0\nelif age < 18:\n    price = 500\n"
        "else:\n    price = 1000\nprint(price)",
    ),
    (
        "count_up", "Count up", LOOPS,
        "Read n and print the numbers from 1 to n, one per line. Use a `for` loop with `range`.",
        ["3", "5"], ["1\n2\n3", "1\n2\n3\n4\n5"],
        "n = int(input())\nfor i in range(1, n + 1):\n    print(i)",
        "n = int(input())\ni = 1\nwhile i <= n:\n    print(i)\n    i += 1",
        "n = int(input())\nfor i in range(1, n):\n    print(i)",
    ),
    (
        "sum_to_n", "Sum from 1 to n", LOOPS,
        "Read n and print the sum of the integers from 1 to n. Add the numbers in a loop "
        "instead of using a formula.",
        ["10", "100"], ["55", "5050"],
        "n = int(input())\ntotal = 0\nfor i in range(1, n + 1):\n    total += i\nprint(total)",
        "n = int(input())\nprint(n * (n + 1) // 2)",
        "n = int(input())\ntotal = 0\nfor i in range(n):\n    total += i\nprint(total)",
    ),
    (
        "factorial", "Factorial", LOOPS,
        "Read n (0 to 10) and print n factorial. Use a `while` loop.",
        ["0", "5"], ["1", "120"],
        "n = int(input())\nresult = 1\nwhile n > 1:\n    result *= n\n    n -= 1\nprint(result)",
        "import math\nprint(math.factorial(int(input())))",
        "n = int(input())\nresult = 0\nwhile n > 1:\n    result *= n\n    n -= 1\nprint(result)",
    ),
    (
        "times_table", "Times table", LOOPS,
        "Read n and print its times table from `n x 1 = n` to `n x 9 = 9n`, one line each. "
        "Use a `for` loop.",
        ["2", "7"],
        ["\n".join(f"{n} x {i} = {n * i}" for i in range(1, 10)) for n in (2, 7)],
        'n = int(input())\nfor i in range(1, 10):\n    print(f"{n} x {i} = {n * i}")',
        'n = int(input())\ni = 1\nwhile i < 10:\n    print(f"{n} x {i} = {n * i}")\n    i += 1',
        'n = int(input())\nfor i in range(1, 9):\n    print(f"{n} x {i} = {n * i}")',
    ),
    (
        "countdown", "Countdown", LOOPS,
        "Read n and count down from n to 1, one number per line, then print `Liftoff!`. "
        "Use a `while` loop.",
        ["3", "1"], ["3\n2\n1\nLiftoff!", "1\nLiftoff!"],
        'n = int(input())\nwhile n > 0:\n    print(n)\n    n -= 1\nprint("Liftoff!")',
        'n = int(input())\nfor i in range(n, 0, -1):\n    print(i)\nprint("Liftoff!")',
        'n = int(input())\nwhile n >= 0:\n    print(n)\n    n -= 1\nprint("Liftoff!")',
    ),
    (
        "digit_sum", "Digit sum", LOOPS,
        "Read a non-negative integer and print the sum of its digits. Take the digits apart "
        "with `%` and `//` in a loop.",
        ["1234", "9"], ["10", "9"],
        "n = int(input())\ntotal = 0\nwhile n > 0:\n    total += n % 10\n    n //= 10\nprint(total)",
        "print(sum(int(d) for d in input()))",
        "n = int(input())\ntotal = 0\nwhile n > 0:\n    total += n % 10\n    n //= 100\nprint(total)",
    ),
    (
        "list_average", "Average of a list", LISTS,
        "Read integers on one line and print their average with two decimal places. Use "
        "`sum` and `len`.",
        ["1 2 3 4", "10 20"], ["2.50", "15.00"],
        'nums = list(map(int, input().split()))\navg = sum(nums) / len(nums)\nprint(f"{avg:.2f}")',
        'nums = list(map(int, input().split()))\ntotal = 0\ncount = 0\nfor x in nums:\n'
        '    total += x\n    count += 1\nprint(f"{total / count:.2f}")',
        'nums = list(map(int, input().split()))\navg = sum(nums) // len(nums)\nprint(f"{avg:.2f}")',
    ),
    (
        "index_of_max", "Position of the largest", LISTS,
        "Read integers on one line and print the index (starting at 0) of the first largest "
        "value. Walk the list with `for i in range(len(nums))`.",
        ["3 9 2", "5 5 1"], ["1", "0"],
        "nums = list(map(int, input().split()))\nbest = 0\nfor i in range(len(nums)):\n"
        "    if nums[i] > nums[best]:\n        best = i\nprint(best)",
        "nums = list(map(int, input().split()))\nprint(nums.index(max(nums)))",
        "nums = list(map(int, input().split()))\nbest = 0\nfor i in range(len(nums)):\n"
        "    if nums[i] >= nums[best]:\n        best = i\nprint(best)",
    ),
    (
        "reverse_words", "Reverse the words", LISTS,
        "Read words on one line and print them in reverse order, separated by spaces. "
        "Reverse the list with slicing.",
        ["a b c", "one two"], ["c b a", "two one"],
        'words = input().split()\nprint(" ".join(words[::-1]))',
        'words = input().split()\nwords.reverse()\nprint(" ".join(words))',
        'words = input().split()\nprint(" ".join(words[1::-1]))',
    ),
    (
        "count_positive", "Count positives", LISTS,
        "Read integers on one line and print how many are greater than zero. Build the "
        "positive values with a list comprehension.",
        ["1 -2 3 0", "-1 -5"], ["2", "0"],
        "nums = list(map(int, input().split()))\npositives = [x for x in nums if x > 0]\n"
        "print(len(positives))",
        "nums = list(map(int, input().split()))\ncount = 0\nfor x in nums:\n    if x > 0:\n"
        "        count += 1\nprint(count)",
        "nums = list(map(int, input().split()))\npositives = [x for x in nums if x >= 0]\n"
        "print(len(positives))",
    ),
    (
        "vowel_count", "Count vowels", STRINGS,
        "Read a lowercase word and print how many vowels (a, e, i, o, u) it contains. Loop "
        "over the characters with `for`.",
        ["banana", "tulip"], ["3", "2"],
        'word = input()\ncount = 0\nfor ch in word:\n    if ch in "aeiou":\n        count += 1\n'
        "print(count)",
        'word = input()\nprint(sum(word.count(v) for v in "aeiou"))',
        'word = input()\ncount = 0\nfor ch in word:\n    if ch in "aeio":\n        count += 1\n'
        "print(count)",
    ),
    (
        "palindrome", "Palindrome check", STRINGS,
        "Read a word and print `yes` if it reads the same backwards, otherwise `no`. Compare "
        "it with its reverse made by slicing.",
        ["level", "python"], ["yes", "no"],
        'word = input()\nif word == word[::-1]:\n    print("yes")\nelse:\n    print("no")',
        'word = input()\nsame = True\nfor i in range(len(word) // 2):\n'
        '    if word[i] != word[-1 - i]:\n        same = False\nprint("yes" if same else "no")',
        'word = input()\nif word == word[::-1][1:]:\n    print("yes")\nelse:\n    print("no")',
    ),
    (
        "initials", "Initials", STRINGS,
        "Read a full name and print its initials in uppercase, each followed by a dot, for "
        "example `K.M.`. Split the name with `split`.",
        ["kim min", "lee ji eun"], ["K.M.", "L.J.E."],
        'parts = input().split()\nprint("".join(p[0].upper() + "." for p in parts))',
        'name = input()\nresult = name[0].upper() + "."\nfor i in range(1, len(name)):\n'
        '    if name[i - 1] == " ":\n        result += name[i].upper() + "."\nprint(result)',
        'parts = input().split()\nprint(".".join(p[0].upper() for p in parts))',
    ),
    (
        "word_lengths", "Word lengths", STRINGS,
        "Read a sentence and print the length of each word, separated by spaces. Use a list "
        "comprehension.",
        ["I like Python", "hello world"], ["1 4 6", "5 5"],
        'words = input().split()\nprint(" ".join(str(len(w)) for w in words))',
        'words = input().split()\nlengths = []\nfor w in words:\n    lengths.append(str(len(w)))\n'
        'print(" ".join(lengths))',
        'words = input().split()\nprint(" ".join(str(len(w) - 1) for w in words))',
    ),
    (
        "square_function", "Square function", FUNCS,
        "Define a function `square(n)` that returns n times n, then read n and print `square(n)`.",
        ["4", "-3"], ["16", "9"],
        "def square(n):\n    return n * n\nprint(square(int(input())))",
        "n = int(input())\nprint(n * n)",
        "def square(n):\n    return n * 2\nprint(square(int(input())))",
    ),
]

EXTRAS = [
    ("prefix", "import math"),
    ("prefix", "import random"),
    ("suffix", "unused = 0"),
    ("prefix", "history = []"),
    ("suffix", "done = True"),
]

REASONS = {
    "HardCoding": "The expected outputs are written literally instead of being computed.",
    "UnnecessaryCode": "The code contains a statement the exercise does not need.",
    "RequirementNotMet": "The exercise asks for a specific approach that the code does not use.",
    "ComputationError": "The result is computed incorrectly for at least one example.",
}

REVIEW = (
    "### Review\n"
    "You are on the right track, and your program already reads the input. "
    "Look again at the line marked below and compare it with the exercise.\n"
    "### Code to fix\n"
    "- line 1: check how the input is read and converted"
)


def run(code, stdin):
    proc = subprocess.run(
        [sys.executable, "-c", code], input=stdin + "\n", capture_output=True, text=True, timeout=10
    )
    if proc.returncode != 0:
        return None
    return "\n".join(l.rstrip() for l in proc.stdout.splitlines()).rstrip()


def passes(code, inputs, outputs):
    return all(run(code, i) == o for i, o in zip(inputs, outputs))


def parses(code):
    try:
        ast.parse(code)
        return True
    except SyntaxError:
        return False


def literal(text):
    return json.dumps(text)


def hard_coded(inputs, outputs, short):
    if short:
        return f"input()\nprint({literal(outputs[0])})"
    lines = ["s = input()"]
    for k, (i, o) in enumerate(zip(inputs[:-1], outputs[:-1])):
        lines.append(f"{'if' if k == 0 else 'elif'} s == {literal(i)}:")
        lines.append(f"    print({literal(o)})")
    lines.append("else:")
    lines.append(f"    print({literal(outputs[-1])})")
    return "\n".join(lines)


def unnecessary(solution, k):
    where, extra = EXTRAS[k % len(EXTRAS)]
    return f"{extra}\n{solution}" if where == "prefix" else f"{solution}\n{extra}"


def exercise_json(ex):
    ex_id, title, cat, desc, ins, outs, sol, _, _ = ex
    return {
        "id": ex_id,
        "title": title,
        "description": desc,
        "input_examples": ins,
        "output_examples": outs,
        "solution": sol,
        "category_path": cat,
    }


def record(ex, code, label, rng):
    ex_id, title, _, desc, _, _, sol, _, _ = ex
    total = rng.randint(5, 60)
    solved = rng.randint(0, total)
    return {
        "ex_id": ex_id,
        "title": title,
        "desc": desc,
        "solution": sol,
        "sub_code": code,
        "solved_subs": solved,
        "total_subs": total,
        "accuracy": solved / total,
        "error_type": label,
    }


def check_exercises():
    assert len(EXERCISES) == 27
    assert len({e[0] for e in EXERCISES}) == 27
    for ex_id, _, _, _, ins, outs, sol, rnm, ce in EXERCISES:
        for code in (sol, rnm, ce):
            assert parses(code), ex_id
        assert passes(sol, ins, outs), f"{ex_id}: solution"
        assert passes(rnm, ins, outs), f"{ex_id}: requirement variant"
        assert not passes(ce, ins, outs), f"{ex_id}: computation variant passes"


def labeled_records(rng):
    out = []
    for n, ex in enumerate(EXERCISES):
        ex_id, _, _, _, ins, outs, sol, rnm, ce = ex
        hc = [hard_coded(ins, outs, False)]
        if n < 3:
            hc.append(hard_coded(ins, outs, True))
        for code in hc:
            assert parses(code) and run(code, ins[0]) == outs[0], ex_id
            out.append(record(ex, code, "HardCoding", rng))
        if n < 26:
            code = unnecessary(sol, n)
            assert parses(code) and passes(code, ins, outs), ex_id
            out.append(record(ex, code, "UnnecessaryCode", rng))
        out.append(record(ex, rnm, "RequirementNotMet", rng))
        if n < 25:
            out.append(record(ex, ce, "ComputationError", rng))
    return out


FAILING = {"HardCoding": 23, "UnnecessaryCode": 19, "RequirementNotMet": 16, "ComputationError": 22}


def code_block(code):
    return f"```python\n{code}\n```"


def tutor_script(records, rng):
    rules = []
    by_type = {}
    for r in records:
        by_type.setdefault(r["error_type"], []).append(r)
    failing = []
    for label, rs in sorted(by_type.items()):
        chosen = rng.sample(range(len(rs)), FAILING[label])
        failing.extend(rs[i] for i in sorted(chosen))
    for r in failing:
        label = r["error_type"]
        rules.append({
            "when": ["## Grading Rules", "## Submitted Code\n" + code_block(r["sub_code"])],
            "reply": f"VERDICT: WRONG\nTYPE: {label}\n{REASONS[label]}",
        })
    rules += [
        {"when": ["## Grading Rules"], "reply": "VERDICT: CORRECT\nThe code meets every requirement."},
        {
            "when": ["Please decide whether this submitted code needs"],
            "reply": {"text": "yes", "input_tokens": 380, "output_tokens": 1},
        },
        {
            "when": ["Review necessity:"],
            "reply": {"text": "yes", "input_tokens": 350, "output_tokens": 1},
        },
        {
            "when": ["## Restriction", "It is very important"],
            "reply": {"text": REVIEW, "input_tokens": 1450, "output_tokens": 640},
        },
        {
            "when": ["## Restriction", "No corrected code."],
            "reply": {"text": REVIEW, "input_tokens": 1100, "output_tokens": 640},
        },
    ]
    return {"rules": rules, "latency": {"base_ms": 50.0, "per_max_output_token_ms": 0.5}}


def break_code(code, k):
    lines = code.split("\n")
    headers = [i for i, l in enumerate(lines) if l.rstrip().endswith(":")]
    kind = k % 4
    if kind == 0 and headers:
        i = headers[0]
        lines[i] = lines[i].rstrip()[:-1]
        return "\n".join(lines), "MissingColon"
    if kind == 1:
        i = max(i for i, l in enumerate(lines) if ")" in l)
        j = lines[i].rindex(")")
        lines[i] = lines[i][:j] + lines[i][j + 1:]
        return "\n".join(lines), "UnbalancedDelimiter"
    if kind == 2:
        return "\n".join(lines + ['print("done)']), "UnterminatedString"
    if headers:
        i = headers[0] + 1
        lines[i] = lines[i].lstrip()
        return "\n".join(lines), "BadIndentation"
    return "\n".join(lines + ["    x = 1"]), "BadIndentation"


def flow_cases():
    cases = []
    empties = ["", "   ", "\n\n", "# nothing yet", "  # TODO: write the loop\n", "\t\n  \n",
               "#", "# first try\n# second try", "\r\n", "    "]
    for k, src in enumerate(empties):
        cases.append({"exercise_id": EXERCISES[k][0], "source": src, "expect": "empty"})
    for k in range(15):
        ex = EXERCISES[(k * 5 + 3) % 27]
        src, kind = break_code(ex[6], k)
        assert not parses(src), (ex[0], kind, src)
        cases.append({"exercise_id": ex[0], "source": src, "expect": "invalid", "kind": kind})
    for k in range(12):
        ex = EXERCISES[(k * 2) % 27]
        cases.append({"exercise_id": ex[0], "source": ex[6], "expect": "looks_good"})
    for k in range(13):
        ex = EXERCISES[(k * 2 + 1) % 27]
        cases.append({"exercise_id": ex[0], "source": ex[8], "expect": "review"})
    assert len(cases) == 50
    return cases


def flow_script(cases):
    rules = [
        {
            "when": ["Answer with only `yes` or `no`.", code_block(c["source"])],
            "reply": "no",
        }
        for c in cases
        if c["expect"] == "looks_good"
    ]
    rules += [
        {"when": ["Answer with only `yes` or `no`."], "reply": "yes"},
        {"when": ["## Restriction"], "reply": REVIEW},
        {"when": ["## Grading Rules"], "reply": "VERDICT: CORRECT\nThe code meets every requirement."},
    ]
    return {"rules": rules}


def write(name, value):
    path = HERE / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(value, indent=2, ensure_ascii=False) + "\n")


def main():
    check_exercises()
    rng = random.Random(20240131)
    exercises = [exercise_json(e) for e in EXERCISES]

    labeled = labeled_records(rng)
    assert len(labeled) == 108
    assert len({(r["ex_id"], r["sub_code"]) for r in labeled}) == 108
    write("eval_bank.json", {"exercises": exercises, "records": labeled})
    write("mock/tutor.json", tutor_script(labeled, rng))

    keep = sorted(rng.sample(range(len(labeled)), 93))
    write("bank.json", {"exercises": exercises, "records": [labeled[i] for i in keep]})

    cases = flow_cases()
    write("flow_cases.json", cases)
    write("mock/flow.json", flow_script(cases))

    write("pricing.json", {"gpt-4": {"input_usd_per_1k": 0.03, "output_usd_per_1k": 0.06}})


if __name__ == "__main__":
    main()
