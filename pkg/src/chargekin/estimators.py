"""scikit-learn compatible wrappers.

The kinematic maps become transformers (poses to joints and back), workspace
membership a classifier, and the regular-workspace search an estimator whose
``fit`` runs the placement bisection. Hyper-parameters follow the usual
``get_params``/``set_params`` protocol so they can be cloned and grid-searched.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .alpha import alpha_fk, alpha_ik
from .beta_gamma import gamma_fk, gamma_ik
from .design import ZOE_DESIGN, DesignParams, JointVector, PlanarPose, SpatialPose, WorkingMode
from .errors import KinematicsError
from .placement import max_inscribed
from .workspace import boundary, margins

__all__ = ["InverseKinematics", "WorkspaceClassifier", "RegularWorkspaceSearch"]


def _check_design(design) -> DesignParams:
    if design is None:
        return ZOE_DESIGN
    if not isinstance(design, DesignParams):
        raise TypeError(f"design must be a DesignParams, got {type(design).__name__}")
    return design


class InverseKinematics(TransformerMixin, BaseEstimator):
    """Map poses to joints with ``transform`` and joints to poses with ``inverse_transform``.

    With ``spatial=False`` rows are ``(x, y)`` of V and ``(rho1, rho2)``;
    with ``spatial=True`` rows are ``(x, y, z)`` of P and ``(rho1, rho2, rho3)``.
    ``errors="nan"`` fills unreachable rows with NaN instead of raising.
    """

    def __init__(self, design=None, spatial=False, assembly=1, errors="raise"):
        self.design = design
        self.spatial = spatial
        self.assembly = assembly
        self.errors = errors

    def fit(self, X=None, y=None):
        if self.errors not in ("raise", "nan"):
            raise ValueError("errors must be 'raise' or 'nan'")
        self.design_ = _check_design(self.design)
        self.mode_ = WorkingMode.accessible(self.assembly)
        self.n_features_in_ = 3 if self.spatial else 2
        return self

    def _apply(self, X, fn, width):
        check_is_fitted(self, "design_")
        X = check_array(X, dtype=float)
        if X.shape[1] != width:
            raise ValueError(f"expected {width} columns, got {X.shape[1]}")
        out = np.full((len(X), width), np.nan)
        for i, row in enumerate(X):
            try:
                out[i] = fn(row)
            except KinematicsError:
                if self.errors == "raise":
                    raise
        return out

    def transform(self, X):
        check_is_fitted(self, "design_")
        p, mode = self.design_, self.mode_
        if self.spatial:
            return self._apply(X, lambda r: gamma_ik(p, SpatialPose(*r), mode).as_tuple(), 3)
        return self._apply(X, lambda r: alpha_ik(p, PlanarPose(*r), mode).as_tuple(), 2)

    def inverse_transform(self, Q):
        check_is_fitted(self, "design_")
        p, mode = self.design_, self.mode_
        if self.spatial:
            def fk(r):
                t = gamma_fk(p, JointVector(*r), mode)
                return (t.x, t.y, t.z)
            return self._apply(Q, fk, 3)

        def fk2(r):
            v = alpha_fk(p, JointVector(*r), mode)
            return (v.x, v.y)
        return self._apply(Q, fk2, 2)


class WorkspaceClassifier(ClassifierMixin, BaseEstimator):
    """Predict whether planar points ``(x, y)`` are reachable.

    ``decision_function`` returns the signed reachability margin in mm. ``fit``
    ignores its data; it only traces the boundary (``region_``).
    """

    def __init__(self, design=None, samples_per_arc=64):
        self.design = design
        self.samples_per_arc = samples_per_arc

    def fit(self, X=None, y=None):
        self.design_ = _check_design(self.design)
        self.region_ = boundary(self.design_, self.samples_per_arc)
        self.classes_ = np.array([False, True])
        self.n_features_in_ = 2
        return self

    def decision_function(self, X):
        check_is_fitted(self, "region_")
        X = check_array(X, dtype=float)
        return margins(self.design_, X[:, 0], X[:, 1])

    def predict(self, X):
        return self.decision_function(X) >= 0


class RegularWorkspaceSearch(BaseEstimator):
    """Largest square-like (Lame) workspace that fits; ``fit`` runs the search.

    Fitted attributes: ``l_b_max_`` (half-side, mm), ``center_``, ``side_``
    and ``result_``.
    """

    def __init__(self, design=None, n=12, tolerance=0.5, grid=64, samples=1024):
        self.design = design
        self.n = n
        self.tolerance = tolerance
        self.grid = grid
        self.samples = samples

    def fit(self, X=None, y=None):
        p = _check_design(self.design)
        res = max_inscribed(p, self.n, self.tolerance, self.grid, self.samples)
        self.result_ = res
        self.l_b_max_ = res.l_b_max
        self.center_ = (res.x_c, res.y_c)
        self.side_ = res.side
        return self

    def score(self, X=None, y=None):
        check_is_fitted(self, "l_b_max_")
        return self.side_
