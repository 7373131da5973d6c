"""Latent Dirichlet allocation by batch variational EM.

Documents carry real-valued pseudo-counts (binned spectral magnitudes);
every update below is linear in the counts, so nothing needs rounding.
The E-step runs the usual fixed point on the per-document Dirichlet
parameters gamma with word responsibilities phi folded in analytically;
the M-step sets the topic-word parameters lambda to the prior plus the
expected counts.  Everything is deterministic given the seed.

Priors, iteration caps and tolerances default to alpha = eta = 1/K,
max_iter = 100, tol = 1e-6; other toolchains may differ, so they are all
exposed as arguments.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import gammaln, psi

from .corpus import Corpus, Vocabulary
from .errors import ValidationError

# E-step fixed-point controls.  Convergence is measured relative to each
# document's gamma scale (alpha*K + total pseudo-count), which is invariant
# across the fixed-point updates; monotonicity of the outer bound does not
# depend on this threshold because E-steps warm-start from the previous
# iteration and every update is coordinate ascent.
_INNER_MAX_ITER = 200
_INNER_REL_TOL = 1e-7
# Documents are processed in blocks of this many rows to bound peak memory;
# blocking never changes the math, only temporary sizes.
_BLOCK_DOCS = 2048
_EPS = 1e-100

MODEL_FORMAT_VERSION = 1


@dataclass
class TopicModel:
    K: int
    topic_word: np.ndarray          # (K, |W|) unnormalized variational parameters
    alpha: float                    # document-topic prior
    eta: float                      # topic-word prior
    seed: int
    n_iters_run: int
    final_bound: float
    bound_trace: list[float] = field(default_factory=list)
    vocabulary: Vocabulary | None = None
    doc_topic: np.ndarray | None = None   # training-set mixtures, (D, K)

    def normalized_topics(self) -> np.ndarray:
        """Rows rescaled to probability vectors."""
        return self.topic_word / self.topic_word.sum(axis=1, keepdims=True)


@dataclass
class TopicWeights:
    doc_topic: np.ndarray           # (D, K), rows on the simplex


def _dirichlet_expectation(x: np.ndarray) -> np.ndarray:
    if x.ndim == 1:
        return psi(x) - psi(x.sum())
    return psi(x) - psi(x.sum(axis=1))[:, None]


def _e_step_block(docs, exp_elog_beta, alpha, gamma0=None):
    """Fixed-point gamma updates for one block of documents.

    Returns the converged gamma and the unnormalized sufficient statistics
    contribution (K, |W|) of the block.  Warm-starting from gamma0 keeps
    successive EM iterations on an ascent path of the evidence bound;
    without it a restarted E-step may settle marginally below the previous
    iteration on a nearly flat objective.
    """
    n_docs, _ = docs.shape
    k = exp_elog_beta.shape[0]
    if gamma0 is None:
        gamma = np.full((n_docs, k), alpha) + docs.sum(axis=1)[:, None] / k
    else:
        gamma = gamma0.copy()
    scale = k * alpha + docs.sum(axis=1)
    exp_elog_theta = np.exp(_dirichlet_expectation(gamma))
    # Documents converge at very different speeds; iterate only the rows
    # that still move.
    active = np.arange(n_docs)
    for _ in range(_INNER_MAX_ITER):
        g_old = gamma[active]
        ee_theta = exp_elog_theta[active]
        sub = docs[active]
        phinorm = ee_theta @ exp_elog_beta + _EPS
        g_new = alpha + ee_theta * ((sub / phinorm) @ exp_elog_beta.T)
        gamma[active] = g_new
        exp_elog_theta[active] = np.exp(_dirichlet_expectation(g_new))
        change = np.abs(g_new - g_old).mean(axis=1) / scale[active]
        active = active[change >= _INNER_REL_TOL]
        if active.size == 0:
            break
    phinorm = exp_elog_theta @ exp_elog_beta + _EPS
    sstats = exp_elog_theta.T @ (docs / phinorm)
    return gamma, sstats


def _e_step(docs, topic_word, alpha, gamma0=None):
    exp_elog_beta = np.exp(_dirichlet_expectation(topic_word))
    gammas = []
    sstats = np.zeros_like(topic_word)
    for start in range(0, docs.shape[0], _BLOCK_DOCS):
        block = docs[start:start + _BLOCK_DOCS]
        warm = None if gamma0 is None else gamma0[start:start + _BLOCK_DOCS]
        gamma, block_stats = _e_step_block(block, exp_elog_beta, alpha, warm)
        gammas.append(gamma)
        sstats += block_stats
    sstats *= exp_elog_beta
    return np.concatenate(gammas, axis=0), sstats


def _bound(docs, gamma, topic_word, alpha, eta):
    """Evidence lower bound with the responsibilities optimized out."""
    k, n_words = topic_word.shape
    elog_theta = _dirichlet_expectation(gamma)
    elog_beta = _dirichlet_expectation(topic_word)
    exp_elog_beta = np.exp(elog_beta)

    score = 0.0
    for start in range(0, docs.shape[0], _BLOCK_DOCS):
        block = docs[start:start + _BLOCK_DOCS]
        exp_elog_theta = np.exp(elog_theta[start:start + _BLOCK_DOCS])
        score += float(np.sum(block * np.log(exp_elog_theta @ exp_elog_beta + _EPS)))

    score += float(np.sum((alpha - gamma) * elog_theta))
    score += float(np.sum(gammaln(gamma) - gammaln(alpha)))
    score += float(np.sum(gammaln(alpha * k) - gammaln(gamma.sum(axis=1))))

    score += float(np.sum((eta - topic_word) * elog_beta))
    score += float(np.sum(gammaln(topic_word) - gammaln(eta)))
    score += float(np.sum(gammaln(eta * n_words) - gammaln(topic_word.sum(axis=1))))
    return score


def _as_doc_matrix(docs, n_words: int) -> np.ndarray:
    docs = np.asarray(docs, dtype=float)
    if docs.ndim == 1:
        docs = docs[None, :]
    if docs.shape[1] != n_words:
        raise ValidationError(
            f"document width {docs.shape[1]} does not match vocabulary size {n_words}"
        )
    if not np.all(np.isfinite(docs)):
        raise ValidationError("document weights must be finite")
    if np.any(docs < 0):
        raise ValidationError("document weights must be >= 0")
    return docs


def fit(
    corpus: Corpus,
    K: int,
    alpha: float | None = None,
    eta: float | None = None,
    max_iter: int = 100,
    tol: float = 1e-6,
    seed: int = 0,
) -> TopicModel:
    """Fit K topics to the pooled corpus.

    Stops once the relative change of the evidence bound drops below tol
    or after max_iter EM iterations.  Topics are reordered by descending
    total mass before the final E-step, so the stored doc_topic matches
    transform() on the same documents exactly.
    """
    if K < 1:
        raise ValidationError("K must be >= 1")
    if corpus.n_docs < 1:
        raise ValidationError("corpus is empty")
    alpha = 1.0 / K if alpha is None else float(alpha)
    eta = 1.0 / K if eta is None else float(eta)
    if alpha <= 0 or eta <= 0:
        raise ValidationError("alpha and eta must be > 0")
    n_words = corpus.vocabulary.size
    if K > n_words:
        warnings.warn(f"K={K} exceeds vocabulary size {n_words}; topics will be redundant")
    docs = _as_doc_matrix(corpus.docs, n_words)

    rng = np.random.default_rng(seed)
    topic_word = rng.gamma(100.0, 1.0 / 100.0, (K, n_words))

    bound_trace: list[float] = []
    gamma = None
    for _ in range(max_iter):
        gamma, sstats = _e_step(docs, topic_word, alpha, gamma0=gamma)
        topic_word = eta + sstats
        bound_trace.append(_bound(docs, gamma, topic_word, alpha, eta))
        if len(bound_trace) > 1:
            prev, cur = bound_trace[-2], bound_trace[-1]
            if abs(cur - prev) < tol * max(abs(prev), 1e-12):
                break

    # Display order: heaviest topic first (ties keep fit order).
    order = np.argsort(-topic_word.sum(axis=1), kind="stable")
    topic_word = topic_word[order]

    gamma, _ = _e_step(docs, topic_word, alpha)
    doc_topic = gamma / gamma.sum(axis=1, keepdims=True)
    return TopicModel(
        K=K,
        topic_word=topic_word,
        alpha=alpha,
        eta=eta,
        seed=seed,
        n_iters_run=len(bound_trace),
        final_bound=bound_trace[-1],
        bound_trace=bound_trace,
        vocabulary=corpus.vocabulary,
        doc_topic=doc_topic,
    )


def transform(model: TopicModel, docs: np.ndarray) -> TopicWeights:
    """Infer topic mixtures for documents against the frozen topic_word."""
    docs = _as_doc_matrix(docs, model.topic_word.shape[1])
    gamma, _ = _e_step(docs, model.topic_word, model.alpha)
    return TopicWeights(doc_topic=gamma / gamma.sum(axis=1, keepdims=True))


def bound(model: TopicModel, corpus: Corpus) -> float:
    """Evidence lower bound of a corpus under the model (E-step included)."""
    docs = _as_doc_matrix(corpus.docs, model.topic_word.shape[1])
    gamma, _ = _e_step(docs, model.topic_word, model.alpha)
    return _bound(docs, gamma, model.topic_word, model.alpha, model.eta)


def topic_spectrum(model: TopicModel, k: int, vocab: Vocabulary | None = None) -> np.ndarray:
    """Topic k as a (channel, bin) grid scaled to [0, 1] by its own maximum.

    Per-topic scaling is what makes the grids comparable as displays; the
    raw rows are not probabilities because documents are unnormalized.
    """
    vocab = vocab or model.vocabulary
    if vocab is None:
        raise ValidationError("no vocabulary available for reshaping")
    if not 0 <= k < model.K:
        raise ValidationError(f"topic index {k} out of range [0, {model.K})")
    grid = model.topic_word[k].reshape(vocab.n_channels, vocab.m)
    return grid / grid.max()


def save_model(model: TopicModel, path, config: dict | None = None) -> None:
    """Persist the model as versioned JSON, optionally embedding the
    pipeline configuration that produced it."""
    obj = {
        "format_version": MODEL_FORMAT_VERSION,
        "K": model.K,
        "alpha": model.alpha,
        "eta": model.eta,
        "seed": model.seed,
        "n_iters_run": model.n_iters_run,
        "final_bound": model.final_bound,
        "bound_trace": model.bound_trace,
        "lambda": model.topic_word.tolist(),
        "vocabulary": None if model.vocabulary is None else {
            "m": model.vocabulary.m,
            "channels": list(model.vocabulary.channels),
        },
    }
    if config is not None:
        obj["config"] = config
    Path(path).write_text(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def load_model(path) -> TopicModel:
    raw = json.loads(Path(path).read_text())
    if raw.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValidationError(
            f"unsupported model format version {raw.get('format_version')!r}"
        )
    vocab = raw.get("vocabulary")
    return TopicModel(
        K=raw["K"],
        topic_word=np.asarray(raw["lambda"], dtype=float),
        alpha=raw["alpha"],
        eta=raw["eta"],
        seed=raw["seed"],
        n_iters_run=raw["n_iters_run"],
        final_bound=raw["final_bound"],
        bound_trace=list(raw["bound_trace"]),
        vocabulary=None if vocab is None else Vocabulary(
            m=vocab["m"], channels=tuple(vocab["channels"])
        ),
    )
