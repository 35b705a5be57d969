"""Surface syntax and JSON codecs for source terms and target terms.

Source grammar (UTF-8):

    term  ::= '\\' ident '.' term  |  'λ' ident '.' term
            | 'mu' ident '.' jump
            | 'let' ident '=' term 'in' term
            | atom+
    atom  ::= ident | '(' term ')'
    jump  ::= '[' ident ']' term
            | 'let' ident '=' term 'in' jump
            | '(' jump ')'

Application is juxtaposition, left-associative. Identifiers match
[a-z][a-zA-Z0-9_]*; continuation identifiers are the ones that appear after
'mu' or inside '[...]'. Target grammar: '\\x. t', juxtaposition, and the
infix dot 't1 . t2' (looser than application, tighter than a lambda body).
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import App, JLet, Jmp, Jump, Lam, Let, Mu, Node, Term, Var
from .target import Dot, TApp, TLam, TTerm, TVar, dot

__all__ = [
    "ParseError", "parse_term", "parse_node", "parse_target",
    "print_term", "print_target",
    "term_to_json", "term_from_json", "target_to_json", "target_from_json",
]

_KEYWORDS = {"let", "in", "mu"}


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass
class _Tok:
    kind: str  # ident, punct
    text: str
    line: int
    col: int


def _tokenize(src: str, punct: tuple[str, ...]) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        c = src[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        if c == "λ":
            toks.append(_Tok("punct", "\\", line, col))
            i += 1
            col += 1
            continue
        if c in punct:
            toks.append(_Tok("punct", c, line, col))
            i += 1
            col += 1
            continue
        if c.islower() and c.isalpha():
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Tok("ident", src[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok], src_len_hint: int = 0):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else _Tok("punct", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col + len(last.text))
        self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, got {t.text!r}", t.line, t.col)
        return t

    def ident(self, what: str = "identifier") -> _Tok:
        t = self.next()
        if t.kind != "ident" or t.text in _KEYWORDS:
            raise ParseError(f"expected {what}, got {t.text!r}", t.line, t.col)
        return t


# --- source terms ----------------------------------------------------------


def parse_term(src: str) -> Term:
    p = _Parser(_tokenize(src, ("\\", ".", "(", ")", "[", "]", "=")))
    t = _term(p)
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    if not isinstance(t, (Var, Lam, App, Let, Mu)):
        raise ParseError("expected a term, got a jump", 1, 1)
    return t


def parse_node(src: str) -> Node:
    """Parse either a term or a jump (jumps start with '[' or a jump-let)."""
    toks = _tokenize(src, ("\\", ".", "(", ")", "[", "]", "="))
    p = _Parser(toks)
    node = _jump(p) if _looks_jumpy(toks) else _term(p)
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return node


def _looks_jumpy(toks: list[_Tok]) -> bool:
    # A jump is "[k]..." possibly under let-prefixes and parens.
    i = 0
    while i < len(toks):
        t = toks[i]
        if t.text == "(":
            i += 1
            continue
        if t.text == "let":
            # skip "let x = term in" by finding the matching "in" at depth 0
            depth = 0
            i += 1
            while i < len(toks):
                if toks[i].text == "(":
                    depth += 1
                elif toks[i].text == ")":
                    depth -= 1
                elif toks[i].text == "in" and depth == 0:
                    i += 1
                    break
                i += 1
            continue
        return t.text == "["
    return False


def _term(p: _Parser) -> Term:
    tok = p.peek()
    if tok is None:
        raise ParseError("unexpected end of input", 1, 1)
    if tok.text == "\\":
        p.next()
        b = p.ident("binder")
        p.expect(".")
        return Lam(b.text, _term(p))
    if tok.text == "mu":
        p.next()
        b = p.ident("continuation binder")
        p.expect(".")
        return Mu(b.text, _jump(p))
    if tok.text == "let":
        p.next()
        b = p.ident("binder")
        p.expect("=")
        arg = _term(p)
        p.expect("in")
        body = _term(p)
        return Let(body, b.text, arg)
    return _app(p)


def _app(p: _Parser) -> Term:
    t = _atom(p)
    while True:
        tok = p.peek()
        if tok is None or tok.text in (")", "]", "in", ".") or tok.text == "=":
            return t
        if tok.kind == "ident" and tok.text in _KEYWORDS and tok.text != "mu":
            return t
        if tok.text in ("\\", "mu", "let", "("):
            t = App(t, _atom(p))
            continue
        if tok.kind == "ident":
            t = App(t, _atom(p))
            continue
        return t


def _atom(p: _Parser) -> Term:
    tok = p.next()
    if tok.text == "(":
        t = _term(p)
        p.expect(")")
        return t
    if tok.text == "\\":
        b = p.ident("binder")
        p.expect(".")
        return Lam(b.text, _term(p))
    if tok.text == "mu":
        b = p.ident("continuation binder")
        p.expect(".")
        return Mu(b.text, _jump(p))
    if tok.text == "let":
        b = p.ident("binder")
        p.expect("=")
        arg = _term(p)
        p.expect("in")
        body = _term(p)
        return Let(body, b.text, arg)
    if tok.kind == "ident":
        return Var(tok.text)
    raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)


def _jump(p: _Parser) -> Jump:
    tok = p.peek()
    if tok is None:
        raise ParseError("unexpected end of input", 1, 1)
    if tok.text == "(":
        p.next()
        j = _jump(p)
        p.expect(")")
        return j
    if tok.text == "let":
        p.next()
        b = p.ident("binder")
        p.expect("=")
        arg = _term(p)
        p.expect("in")
        body = _jump(p)
        return JLet(body, b.text, arg)
    if tok.text == "[":
        p.next()
        k = p.ident("continuation variable")
        p.expect("]")
        return Jmp(k.text, _term(p))
    raise ParseError(f"expected a jump, got {tok.text!r}", tok.line, tok.col)


def print_term(t: Node) -> str:
    """Deterministic text form; parses back to an alpha-equal node."""
    match t:
        case Var(n):
            return n
        case Lam(b, body):
            return f"\\{b}. {print_term(body)}"
        case App(f, a):
            fs = print_term(f) if isinstance(f, (Var, App)) else f"({print_term(f)})"
            as_ = print_term(a) if isinstance(a, Var) else f"({print_term(a)})"
            return f"{fs} {as_}"
        case Let(body, b, arg):
            args = print_term(arg)
            if isinstance(arg, Let):
                args = f"({args})"
            return f"let {b} = {args} in {print_term(body)}"
        case Mu(b, j):
            return f"mu {b}. {print_term(j)}"
        case Jmp(k, body):
            return f"[{k}] {print_term(body)}"
        case JLet(body, b, arg):
            args = print_term(arg)
            if isinstance(arg, Let):
                args = f"({args})"
            return f"let {b} = {args} in {print_term(body)}"
    raise TypeError(t)


# --- target terms ----------------------------------------------------------


def parse_target(src: str) -> TTerm:
    p = _Parser(_tokenize(src, ("\\", ".", "(", ")")))
    t = _tgt_term(p)
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return t


def _tgt_term(p: _Parser) -> TTerm:
    tok = p.peek()
    if tok is not None and tok.text == "\\":
        p.next()
        b = p.ident("binder")
        p.expect(".")
        return TLam(b.text, _tgt_term(p))
    parts = [_tgt_app(p)]
    while True:
        tok = p.peek()
        if tok is not None and tok.text == ".":
            p.next()
            parts.append(_tgt_app(p))
        else:
            break
    return parts[0] if len(parts) == 1 else dot(*parts)


def _tgt_app(p: _Parser) -> TTerm:
    t = _tgt_atom(p)
    while True:
        tok = p.peek()
        if tok is None or tok.text in (")", "."):
            return t
        if tok.text == "(" or tok.kind == "ident" or tok.text == "\\":
            t = TApp(t, _tgt_atom(p))
            continue
        return t


def _tgt_atom(p: _Parser) -> TTerm:
    tok = p.next()
    if tok.text == "(":
        t = _tgt_term(p)
        p.expect(")")
        return t
    if tok.text == "\\":
        b = p.ident("binder")
        p.expect(".")
        return TLam(b.text, _tgt_term(p))
    if tok.kind == "ident":
        return TVar(tok.text)
    raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)


def print_target(t: TTerm) -> str:
    match t:
        case TVar(n):
            return n
        case TLam(b, body):
            return f"\\{b}. {print_target(body)}"
        case TApp(f, a):
            fs = print_target(f) if isinstance(f, (TVar, TApp)) else f"({print_target(f)})"
            as_ = print_target(a) if isinstance(a, TVar) else f"({print_target(a)})"
            return f"{fs} {as_}"
        case Dot(parts):
            rendered = []
            for q in parts:
                s = print_target(q)
                rendered.append(s if isinstance(q, (TVar, TApp)) else f"({s})")
            return " . ".join(rendered)
    raise TypeError(t)


# --- JSON ------------------------------------------------------------------


def term_to_json(t: Node):
    match t:
        case Var(n):
            return {"tag": "Var", "name": n}
        case Lam(b, body):
            return {"tag": "Lam", "binder": b, "body": term_to_json(body)}
        case App(f, a):
            return {"tag": "App", "fun": term_to_json(f), "arg": term_to_json(a)}
        case Let(body, b, arg):
            return {"tag": "Let", "binder": b, "arg": term_to_json(arg),
                    "body": term_to_json(body)}
        case Mu(b, j):
            return {"tag": "Mu", "binder": b, "jump": term_to_json(j)}
        case Jmp(k, body):
            return {"tag": "Jmp", "target": k, "body": term_to_json(body)}
        case JLet(body, b, arg):
            return {"tag": "JLet", "binder": b, "arg": term_to_json(arg),
                    "body": term_to_json(body)}
    raise TypeError(t)


def term_from_json(obj) -> Node:
    tag = obj["tag"]
    if tag == "Var":
        return Var(obj["name"])
    if tag == "Lam":
        return Lam(obj["binder"], term_from_json(obj["body"]))
    if tag == "App":
        return App(term_from_json(obj["fun"]), term_from_json(obj["arg"]))
    if tag == "Let":
        return Let(term_from_json(obj["body"]), obj["binder"], term_from_json(obj["arg"]))
    if tag == "Mu":
        return Mu(obj["binder"], term_from_json(obj["jump"]))
    if tag == "Jmp":
        return Jmp(obj["target"], term_from_json(obj["body"]))
    if tag == "JLet":
        return JLet(term_from_json(obj["body"]), obj["binder"], term_from_json(obj["arg"]))
    raise ValueError(f"unknown tag {tag!r}")


def target_to_json(t: TTerm):
    match t:
        case TVar(n):
            return {"tag": "TVar", "name": n}
        case TLam(b, body):
            return {"tag": "TLam", "binder": b, "body": target_to_json(body)}
        case TApp(f, a):
            return {"tag": "TApp", "fun": target_to_json(f), "arg": target_to_json(a)}
        case Dot(parts):
            return {"tag": "Dot", "parts": [target_to_json(q) for q in parts]}
    raise TypeError(t)


def target_from_json(obj) -> TTerm:
    tag = obj["tag"]
    if tag == "TVar":
        return TVar(obj["name"])
    if tag == "TLam":
        return TLam(obj["binder"], target_from_json(obj["body"]))
    if tag == "TApp":
        return TApp(target_from_json(obj["fun"]), target_from_json(obj["arg"]))
    if tag == "Dot":
        return dot(*[target_from_json(q) for q in obj["parts"]])
    raise ValueError(f"unknown tag {tag!r}")
