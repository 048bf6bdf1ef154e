from dataclasses import asdict, dataclass, field
from typing import Optional

from ezytamp import fields as fld
from ezytamp import validators as vld
from ezytamp.errors import InputError
from ezytamp.estimator.overlap import OverlapParams


@dataclass
class RunConfig:
    """Hyperparameters of one mission run; defaults follow the reference setup."""

    algorithm: str = fld.ALGO_INTER_LLM
    seed: int = 0
    m_candidates: int = fld.DEFAULT_M_CANDIDATES
    gamma_nav: float = fld.DEFAULT_GAMMA_NAV
    gamma_man: float = fld.DEFAULT_GAMMA_MAN
    gamma_obj: float = fld.DEFAULT_GAMMA_OBJ
    sigma: float = fld.DEFAULT_SIGMA
    overlap: OverlapParams = field(default_factory=OverlapParams)
    retry_budget: Optional[int] = None
    backend: str = fld.BACKEND_SCRIPTED
    n_l: int = fld.DEFAULT_N_L
    max_retries: int = fld.DEFAULT_MAX_RETRIES

    def __post_init__(self):
        self.algorithm = fld.ALGO_ALIAS_MAP.get(self.algorithm, self.algorithm)
        vld.check_choice(self.algorithm, fld.ALGO_LIST, "algorithm")
        vld.check_choice(self.backend, fld.BACKEND_LIST, "backend")
        vld.check_pct(self.sigma, "sigma")
        for k in ("gamma_nav", "gamma_man", "gamma_obj"):
            vld.check_non_negative(getattr(self, k), k)
        if self.m_candidates < 1:
            msg = "m_candidates must be at least 1"
            raise InputError(msg)
        if self.n_l < 1:
            msg = "n_l must be at least 1"
            raise InputError(msg)
        if self.max_retries < 0:
            msg = "max_retries must be non-negative"
            raise InputError(msg)
        if self.retry_budget is not None and self.retry_budget < 1:
            msg = "retry_budget must be at least 1"
            raise InputError(msg)

    @property
    def effective_retry_budget(self) -> int:
        if self.retry_budget is not None:
            return self.retry_budget
        return fld.DEFAULT_RETRY_BUDGET_MAP[self.algorithm]

    @property
    def attempt_budget(self) -> int:
        """Real manipulation attempts per action; reactive replans instead."""
        if self.algorithm == fld.ALGO_REACTIVE:
            return 1
        return self.effective_retry_budget

    def to_dict(self) -> dict:
        data = asdict(self)
        data["retry_budget"] = self.effective_retry_budget
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        overlap = data.pop("overlap", None) or {}
        return cls(overlap=OverlapParams(**overlap), **data)
