"""The bundled line-arrangement dataset and helpers to load DSL files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .bands import PunctureConfig
from .dsl import Document, Stub, parse_document, resolve
from .factorization import Bundle, Factorization

DATA_FILES = ("parasitic_D.mt", "parasitic_C.mt", "hv_heads.mt")

#: Declared degree of one F1hat block (F1hat and its conjugate contribute 48).
F1HAT_DEGREE = 24

GLOBAL_CONFIG = "54p"
LOCAL_CONFIG = "12p"


def data_text(name: str) -> str:
    return resources.files("braidmon.data").joinpath(name).read_text(encoding="utf-8")


def load_document(*names: str) -> Document:
    """Parse and merge the named bundled files (later ``let``s win)."""
    lets: dict = {}
    facts: dict = {}
    for name in names:
        doc = parse_document(data_text(name))
        lets.update(doc.lets)
        facts.update(doc.factorizations)
    return Document(lets, facts)


def read_document(path: str | Path) -> Document:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def default_bindings() -> dict:
    return {"F1hat": Stub(F1HAT_DEGREE)}


def resolve_symbol(doc: Document, name: str, config: PunctureConfig, bindings=None) -> Factorization:
    expr = doc.factorizations.get(name) or doc.lets.get(name)
    if expr is None:
        raise KeyError(name)
    if isinstance(expr, Stub):
        raise ValueError(f"{name} is a stub")
    return resolve(expr, config, doc.lets, default_bindings() if bindings is None else bindings,
                   origin=(name,))


def parasitic_parts() -> list[tuple[str, Factorization]]:
    """``C_1 .. C_9`` resolved on the 54-point configuration."""
    doc = load_document("parasitic_D.mt", "parasitic_C.mt")
    cfg = PunctureConfig.from_name(GLOBAL_CONFIG)
    return [(f"C_{i}", resolve_symbol(doc, f"C_{i}", cfg)) for i in range(1, 10)]


def parasitic_factorization() -> Factorization:
    doc = load_document("parasitic_D.mt", "parasitic_C.mt")
    return resolve_symbol(doc, "C", PunctureConfig.from_name(GLOBAL_CONFIG))


def d_factorizations() -> list[tuple[str, Factorization]]:
    doc = load_document("parasitic_D.mt")
    cfg = PunctureConfig.from_name(GLOBAL_CONFIG)
    return [(f"D_{t}", resolve_symbol(doc, f"D_{t}", cfg)) for t in range(1, 28)]


def head_factorization(i: int, bindings=None) -> Factorization:
    """``H_Vi`` on the local 12-point configuration (F1hat stubbed by default)."""
    doc = load_document("hv_heads.mt")
    return resolve_symbol(doc, f"H_V{i}", PunctureConfig.from_name(LOCAL_CONFIG), bindings)


def load_bundle(bindings=None) -> Bundle:
    """The global factorization as ``C_1 H_V1 C_2 H_V2 ... C_9 H_V9``.

    Parasitic parts live on the 54-point configuration and the heads on
    their local 12-point models, so the bundle supports degree bookkeeping
    but not a single product.
    """
    parts: list[tuple[str, Factorization]] = []
    cs = parasitic_parts()
    for i in range(1, 10):
        parts.append(cs[i - 1])
        parts.append((f"H_V{i}", head_factorization(i, bindings)))
    return Bundle(tuple(parts))


def hv2_relations(cusp_form: str = "involutive"):
    """The 74 local relations at V2 as :class:`~braidmon.vankampen.Relation` objects."""
    from .vankampen import parse_relation_list

    return parse_relation_list(data_text("hv2_relations.txt"), cusp_form)
