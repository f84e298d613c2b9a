"""
Parser for textual copula model specifications.

Grammar (whitespace is ignored between tokens)::

    spec    := ordinal | family
    family  := NAME '(' [arg (',' arg)*] ')'
    arg     := NAME '=' number
    number  := ['+'|'-'] decimal ['/' decimal]
    ordinal := 'ordinal' '(' block (';' block)* ')'
    block   := '[' number ',' number ']' ':' family

Families and their parameters:

    independence() | indep()
    m() | frechet_m()
    clayton(theta=...) | clayton(tau=...)
    gumbel(theta=...)  | gumbel(tau=...)
    t(rho=..., df=1)   | t(tau=..., df=1)
    aneglog(theta=..., psi1=1, psi2=1) | aneglog(lambdaU=..., psi1=1, psi2=1)

Examples: ``clayton(theta=1)``, ``gumbel(tau=1/3)``,
``ordinal([0,0.5]:gumbel(tau=0);[0.5,1]:clayton(tau=1/3))``.
"""

import re
from typing import Dict, List, Tuple

from .copula_models import (
    AsymNegLogistic,
    Clayton,
    CopulaModel,
    DependenceSpec,
    FrechetM,
    Gumbel,
    Independence,
    OrdinalSum,
    StudentT,
)
from .exceptions import SpecParseError

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_DECIMAL = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

# Allowed argument sets per family (each tuple is one accepted combination of required keys)
_FAMILY_ARGS = {
    "independence": ((), ()),
    "m": ((), ()),
    "clayton": ((("theta",), ("tau",)), ()),
    "gumbel": ((("theta",), ("tau",)), ()),
    "t": ((("rho",), ("tau",)), ("df",)),
    "aneglog": ((("theta",), ("lambdau",)), ("psi1", "psi2")),
}

_ALIASES = {
    "indep": "independence",
    "independence": "independence",
    "pi": "independence",
    "m": "m",
    "frechet_m": "m",
    "comonotone": "m",
    "clayton": "clayton",
    "gumbel": "gumbel",
    "t": "t",
    "student_t": "t",
    "aneglog": "aneglog",
}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int = None):
        raise SpecParseError(message, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.error(f"expected '{char}', found {found}")
        self.pos += 1

    def name(self) -> Tuple[str, int]:
        self.skip()
        match = _NAME.match(self.text, self.pos)
        if not match:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.error(f"expected a name, found {found}")
        start = self.pos
        self.pos = match.end()
        return match.group(0), start

    def decimal(self) -> float:
        self.skip()
        match = _DECIMAL.match(self.text, self.pos)
        if not match:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.error(f"expected a number, found {found}")
        self.pos = match.end()
        return float(match.group(0))

    def number(self) -> float:
        sign = 1.0
        c = self.peek()
        if c and c in "+-":
            sign = -1.0 if c == "-" else 1.0
            self.pos += 1
        value = self.decimal()
        if self.peek() == "/":
            slash = self.pos
            self.pos += 1
            denominator = self.decimal()
            if denominator == 0:
                self.error("division by zero", slash)
            value /= denominator
        return sign * value

    def spec(self) -> CopulaModel:
        model = self.model(in_ordinal=False)
        self.skip()
        if self.pos != len(self.text):
            self.error(f"unexpected trailing input {self.text[self.pos:]!r}")
        return model

    def model(self, in_ordinal: bool) -> CopulaModel:
        name, start = self.name()
        key = name.lower()
        if key == "ordinal":
            if in_ordinal:
                self.error("nested ordinal sums are not supported", start)
            return self.ordinal()
        if key not in _ALIASES:
            self.error(f"unknown copula family '{name}'", start)
        family = _ALIASES[key]
        args = self.arguments()
        return self.build(family, args, start, in_ordinal)

    def arguments(self) -> Dict[str, Tuple[float, int]]:
        self.expect("(")
        args: Dict[str, Tuple[float, int]] = {}
        if self.peek() == ")":
            self.pos += 1
            return args
        while True:
            key, start = self.name()
            self.expect("=")
            value = self.number()
            if key.lower() in args:
                self.error(f"duplicate parameter '{key}'", start)
            args[key.lower()] = (value, start)
            if self.peek() == ",":
                self.pos += 1
                continue
            self.expect(")")
            return args

    def ordinal(self) -> OrdinalSum:
        self.expect("(")
        partition: List[Tuple[float, float]] = []
        components: List[CopulaModel] = []
        while True:
            self.expect("[")
            a = self.number()
            self.expect(",")
            b = self.number()
            self.expect("]")
            self.expect(":")
            partition.append((a, b))
            components.append(self.model(in_ordinal=True))
            if self.peek() == ";":
                self.pos += 1
                continue
            self.expect(")")
            return OrdinalSum(tuple(partition), tuple(components))

    def build(self, family: str, args: Dict[str, Tuple[float, int]], start: int,
              in_ordinal: bool) -> CopulaModel:
        choices, optional = _FAMILY_ARGS[family]
        allowed = set(optional).union(*[set(c) for c in choices]) if choices else set(optional)
        for key, (_, pos) in args.items():
            if key not in allowed:
                self.error(f"unknown parameter '{key}' for {family}", pos)
        if choices:
            present = [c for c in choices if all(k in args for k in c)]
            if len(present) != 1:
                names = " or ".join("/".join(c) for c in choices)
                self.error(f"{family} needs exactly one of {names}", start)

        def get(key, default=None):
            return args[key][0] if key in args else default

        if family == "independence":
            return Independence()
        if family == "m":
            return FrechetM()
        if family == "clayton":
            if "tau" in args:
                return DependenceSpec(kendall_tau=get("tau")).calibrate("clayton", allow_negative=in_ordinal)
            return Clayton(get("theta"), allow_negative=in_ordinal)
        if family == "gumbel":
            if "tau" in args:
                return DependenceSpec(kendall_tau=get("tau")).calibrate("gumbel")
            return Gumbel(get("theta"))
        if family == "t":
            df = get("df", 1)
            if df != int(df):
                self.error(f"t copula df must be an integer, got {df}", args["df"][1])
            if "tau" in args:
                return DependenceSpec(kendall_tau=get("tau")).calibrate("t", df=int(df))
            return StudentT(get("rho"), int(df))
        psi1, psi2 = get("psi1", 1.0), get("psi2", 1.0)
        if "lambdau" in args:
            return DependenceSpec(lambda_U=get("lambdau")).calibrate("aneglog", psi1=psi1, psi2=psi2)
        return AsymNegLogistic(get("theta"), psi1, psi2)


def parse_model(text: str) -> CopulaModel:
    """
    Parse a model specification string.

    Args:
        text: Specification, e.g. ``gumbel(tau=1/3)``

    Returns:
        CopulaModel

    Raises:
        SpecParseError: Malformed specification (``position`` is the 0-based offset)
        ParameterDomainError: Well-formed specification with invalid parameters
    """
    return _Parser(text).spec()
