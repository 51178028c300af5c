"""
OpenQASM 2 subset parser

Grammar: optional ``OPENQASM 2.0;`` header and ``include`` lines, exactly one
``qreg``, an optional ``creg``, then gate statements from the supported set,
``measure q[i] -> c[j];`` and ``barrier``. ``//`` comments are ignored.
Angles are literal arithmetic expressions over numbers and ``pi``.
"""

import math
import operator
from typing import Any, List

import pyparsing as pp

from .circuit import Circuit, Gate, GateKind
from ..utils.exceptions import (
    QasmSyntaxError, UnsupportedGateError, QubitOutOfRangeError, ValidationError
)
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)

_SUPPORTED = {kind.value: kind for kind in GateKind if kind not in (GateKind.MEASURE, GateKind.BARRIER)}

_BINARY_OPS = {
    '+': operator.add,
    '-': operator.sub,
    '*': operator.mul,
    '/': operator.truediv,
    '^': operator.pow,
}


class _Expr:
    """Deferred arithmetic expression node"""

    def __init__(self, kind: str, value: Any):
        self.kind = kind
        self.value = value

    def evaluate(self) -> float:
        if self.kind == 'number':
            return float(self.value)
        if self.kind == 'pi':
            return math.pi
        if self.kind == 'neg':
            return -self.value.evaluate()
        operands = self.value
        result = operands[0].evaluate()
        for index in range(1, len(operands), 2):
            result = _BINARY_OPS[operands[index]](result, operands[index + 1].evaluate())
        return result


def _unary(tokens):
    sign, operand = tokens[0]
    return _Expr('neg', operand) if sign == '-' else operand


def _binary(tokens):
    return _Expr('binary', list(tokens[0]))


def _build_grammar() -> pp.ParserElement:
    semi = pp.Suppress(';')
    lbrack, rbrack = map(pp.Suppress, '[]')
    lparen, rparen = map(pp.Suppress, '()')
    identifier = pp.Word(pp.alphas + '_', pp.alphanums + '_')
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))

    number = pp.Regex(r'(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?')
    number.set_parse_action(lambda t: _Expr('number', t[0]))
    pi = pp.Keyword('pi').set_parse_action(lambda t: _Expr('pi', None))
    expr = pp.infix_notation(
        number | pi,
        [
            (pp.one_of('+ -'), 1, pp.OpAssoc.RIGHT, _unary),
            ('^', 2, pp.OpAssoc.RIGHT, _binary),
            (pp.one_of('* /'), 2, pp.OpAssoc.LEFT, _binary),
            (pp.one_of('+ -'), 2, pp.OpAssoc.LEFT, _binary),
        ],
    )

    qubit_ref = pp.Group(identifier('register') + lbrack + integer('index') + rbrack)

    header = pp.Suppress(pp.Keyword('OPENQASM') + pp.Regex(r'\d+(\.\d+)?') + semi)
    include = pp.Suppress(pp.Keyword('include') + pp.QuotedString('"') + semi)
    qreg = pp.Group(pp.Keyword('qreg') + identifier('name') + lbrack + integer('size') + rbrack + semi)
    creg = pp.Group(pp.Keyword('creg') + identifier('name') + lbrack + integer('size') + rbrack + semi)

    measure = pp.Group(
        pp.Keyword('measure')('op') + qubit_ref('qubit') + pp.Suppress('->') + qubit_ref('bit') + semi
    )
    barrier = pp.Group(pp.Keyword('barrier')('op') + pp.Group(pp.DelimitedList(qubit_ref))('qargs') + semi)
    gate = pp.Group(
        ~(pp.Keyword('qreg') | pp.Keyword('creg') | pp.Keyword('measure') | pp.Keyword('barrier'))
        + identifier('op')
        + pp.Optional(lparen + pp.Group(pp.Optional(pp.DelimitedList(expr)))('params') + rparen)
        + pp.Group(pp.DelimitedList(qubit_ref))('qargs')
        + semi
    )
    for element in (measure, barrier, gate):
        element.add_parse_action(lambda s, loc, t: t[0].__setitem__('loc', loc))

    program = (
        pp.Optional(header)
        + pp.ZeroOrMore(include)
        + qreg('qreg')
        + pp.Optional(creg('creg'))
        + pp.Group(pp.ZeroOrMore(measure | barrier | gate))('body')
        + pp.StringEnd()
    )
    program.ignore(pp.cpp_style_comment)
    return program


_GRAMMAR = _build_grammar()


def parse_qasm(text: str, name: str = "circuit") -> Circuit:
    """Parse a program in the supported OpenQASM 2 subset

    Args:
        text: Program text
        name: Name given to the resulting circuit

    Returns:
        Circuit: Gates in source order
    """
    try:
        parsed = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise QasmSyntaxError(f"QASM syntax error: {e.msg}", line=e.lineno, column=e.col) from e

    register = parsed['qreg']['name']
    num_qubits = parsed['qreg']['size']
    creg_size = parsed['creg']['size'] if 'creg' in parsed else 0
    gates: List[Gate] = []

    def resolve(ref, line: int) -> int:
        if ref['register'] != register:
            raise QasmSyntaxError(f"Unknown quantum register '{ref['register']}'", line=line, column=1)
        if ref['index'] >= num_qubits:
            raise QubitOutOfRangeError(ref['index'], num_qubits, line=line)
        return ref['index']

    for statement in parsed['body']:
        line = pp.lineno(statement['loc'], text)
        op = statement['op']
        if op == 'measure':
            qubit = resolve(statement['qubit'], line)
            bit = statement['bit']
            if creg_size and bit['index'] >= creg_size:
                raise QasmSyntaxError(f"Classical bit {bit['index']} out of range", line=line, column=1)
            gates.append(Gate(GateKind.MEASURE, (qubit,)))
        elif op == 'barrier':
            qubits = tuple(resolve(ref, line) for ref in statement['qargs'])
            gates.append(Gate(GateKind.BARRIER, qubits))
        else:
            kind = _SUPPORTED.get(op)
            if kind is None:
                raise UnsupportedGateError(op, line=line)
            qubits = tuple(resolve(ref, line) for ref in statement['qargs'])
            params = tuple(p.evaluate() for p in statement.get('params', []))
            try:
                gates.append(Gate(kind, qubits, params))
            except ValidationError as e:
                raise QasmSyntaxError(str(e), line=line, column=1) from e

    logger.debug("Parsed QASM program", extra={'num_qubits': num_qubits, 'num_gates': len(gates)})
    return Circuit(num_qubits, tuple(gates), name=name)
