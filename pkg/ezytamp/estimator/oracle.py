import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ezytamp import fields as fld
from ezytamp import validators as vld
from ezytamp.connect import LLMClient
from ezytamp.scene.graph import SceneGraph, SemanticAttributes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AttributeBundle:
    kind: str
    obj: str
    furniture: str
    object_attributes: SemanticAttributes
    furniture_attributes: SemanticAttributes

    @classmethod
    def from_graph(
        cls, graph: SceneGraph, kind: str, obj: str, furniture: str
    ) -> "AttributeBundle":
        return cls(
            kind=kind,
            obj=obj,
            furniture=furniture,
            object_attributes=graph.object_node(obj).attributes,
            furniture_attributes=graph.furniture_node(furniture).attributes,
        )

    def describe(self) -> str:
        o = self.object_attributes
        f = self.furniture_attributes
        return (
            f"{self.kind} {self.obj} (category: {o.category}; usage: {o.usage}) "
            f"at {self.furniture} (location: {f.location}; category: {f.category})"
        )


KnownLabel = Tuple[AttributeBundle, str]


class SemanticOracle(ABC):
    """Transfers known manipulation-cost labels to an unseen manipulation."""

    @abstractmethod
    def infer(self, query: AttributeBundle, known: Sequence[KnownLabel]) -> str:
        """Return one of hard, medium, easy or unknown."""


class RuleOracle(SemanticOracle):
    """Deterministic attribute-matching oracle.

    Strictness ``sigma`` selects what a known record must share with the
    query (the action kind always):

    - ``sigma < 0.3``: nothing else
    - ``0.3 <= sigma < 0.6``: furniture or object category
    - ``0.6 <= sigma <= 0.9``: furniture, and object category or usage
    - ``0.9 < sigma < 1.0``: furniture and object category
    - ``sigma == 1.0``: the same object on the same furniture

    Among qualifying records the one sharing most attributes wins, the most
    recent one on ties.
    """

    def __init__(self, sigma: float = fld.DEFAULT_SIGMA):
        vld.check_pct(sigma, "sigma")
        self.sigma = sigma

    def qualifies(self, query: AttributeBundle, record: AttributeBundle) -> bool:
        if query.kind != record.kind:
            return False
        same_fur = query.furniture == record.furniture
        same_cat = query.object_attributes.category == record.object_attributes.category
        same_use = query.object_attributes.usage == record.object_attributes.usage
        sigma = self.sigma
        if sigma >= 1.0:
            return query.obj == record.obj and same_fur
        if sigma > 0.9:  # noqa: PLR2004
            return same_fur and same_cat
        if sigma >= 0.6:  # noqa: PLR2004
            return same_fur and (same_cat or same_use)
        if sigma >= 0.3:  # noqa: PLR2004
            return same_fur or same_cat
        return True

    @staticmethod
    def _score(query: AttributeBundle, record: AttributeBundle) -> int:
        return (
            10 * (query.obj == record.obj and query.furniture == record.furniture)
            + 2 * (query.furniture == record.furniture)
            + (query.object_attributes.category == record.object_attributes.category)
            + (query.object_attributes.usage == record.object_attributes.usage)
        )

    def infer(self, query: AttributeBundle, known: Sequence[KnownLabel]) -> str:
        best: Optional[Tuple[int, str]] = None
        for record, label in known:
            if not self.qualifies(query, record):
                continue
            score = self._score(query, record)
            if best is None or score >= best[0]:
                best = (score, label)
        return best[1] if best is not None else fld.LABEL_UNKNOWN


SYSTEM_PROMPT = """\
You estimate how hard a household robot manipulation will be.
You are given manipulations the robot has already executed, each with a cost
label (easy, medium or hard), and one new manipulation. If a known
manipulation is semantically similar to the new one (similar object, similar
furniture), answer with its label. If you find it unreasonable to infer a
cost, answer unknown.
Answer with exactly one word: hard, medium, easy or unknown."""

_word = re.compile(r"[a-z]+")


def parse_label(text: str) -> str:
    """Exactly one vocabulary word, otherwise unknown."""
    words = _word.findall(text.lower())
    if len(words) == 1 and words[0] in fld.LABEL_LIST:
        return words[0]
    return fld.LABEL_UNKNOWN


class LLMOracle(SemanticOracle):
    """Chat-completion oracle; ``sigma`` is the sampling temperature."""

    def __init__(self, client: LLMClient, sigma: float = fld.DEFAULT_SIGMA):
        self.client = client
        self.sigma = sigma

    def build_messages(
        self, query: AttributeBundle, known: Sequence[KnownLabel]
    ) -> List[dict]:
        lines = [f"- {b.describe()}: {label}" for b, label in known]
        user = (
            "Known manipulations:\n"
            + ("\n".join(lines) if lines else "(none)")
            + f"\n\nNew manipulation:\n- {query.describe()}\n\nLabel:"
        )
        return [
            {"role": "system", "content": SYSTEM_PROMPT},
            {"role": "user", "content": user},
        ]

    def infer(self, query: AttributeBundle, known: Sequence[KnownLabel]) -> str:
        text = self.client.chat(self.build_messages(query, known), self.sigma)
        label = parse_label(text)
        logger.debug("Oracle answer %r parsed as %s", text, label)
        return label
