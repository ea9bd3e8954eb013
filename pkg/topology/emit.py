"""
topology/emit.py  –  JSON and graphviz DOT output for chains, tables and reports.
"""

import json
from pathlib import Path
from typing import Optional, Type, TypeVar, Union

import graphviz
from loguru import logger
from pydantic import BaseModel

from topology.chains import LazyChain, chain_graph
from topology.errors import EmitError
from topology.homo import RuleTable
from topology.models import Chain, HomomorphismTable

M = TypeVar("M", bound=BaseModel)

_COLORS = {"blue": "blue", "red": "red", "extra": "gray", "boundary": "black"}


def _write(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def emit_json(entity, path: Union[str, Path]) -> Path:
    """Pydantic entities dump as-is; tables also get the readable {generator: word} form."""
    if isinstance(entity, (LazyChain, RuleTable)):
        raise EmitError(f"{type(entity).__name__} has no stage bound; materialize it before emitting")
    if isinstance(entity, HomomorphismTable):
        payload = json.loads(entity.model_dump_json())
        payload["table"] = entity.to_table_json()
        text = json.dumps(payload, indent=2, ensure_ascii=False)
    elif isinstance(entity, BaseModel):
        text = entity.model_dump_json(indent=2)
    else:
        raise EmitError(f"cannot serialize {type(entity).__name__}")
    out = _write(path, text)
    logger.info(f"wrote {type(entity).__name__} to {out}")
    return out


def load_json(cls: Type[M], path: Union[str, Path]) -> M:
    text = Path(path).read_text(encoding="utf-8")
    if cls is HomomorphismTable:
        payload = json.loads(text)
        payload.pop("table", None)
        text = json.dumps(payload)
    return cls.model_validate_json(text)


def chain_dot(chain: Chain, n: Optional[int] = None) -> graphviz.Graph:
    graph = chain_graph(chain, n)
    dot = graphviz.Graph(comment=f"Alexander chain {chain.exhaustion.blueprint.family}", engine="neato")
    dot.attr(overlap="false", fontname="Arial")
    dot.attr("node", shape="circle", style="filled", fontcolor="white", fontsize="10")
    for name, data in graph.nodes(data=True):
        dot.node(name, name, fillcolor=_COLORS[data["color"]])
    for a, b in graph.edges:
        dot.edge(a, b)
    return dot


def emit_dot(chain: Union[Chain, LazyChain], path: Union[str, Path], n: Optional[int] = None) -> Path:
    """Write the chain graph (i = 1 edges) as DOT source."""
    if isinstance(chain, LazyChain):
        raise EmitError(f"lazy chain {chain.family!r} has no stage bound; materialize it first")
    out = _write(path, chain_dot(chain, n).source)
    logger.info(f"wrote chain graph to {out}")
    return out
