import numpy as np
import pytest

import quakescope as q


@pytest.fixture(scope="session")
def four_phase_bundle():
    """The 4-phase reference record fitted with K=3; shared because the fit
    takes a few seconds."""
    record = q.four_phase_demo()
    cfg = q.PipelineConfig(K=3)
    docs = q.documents_for_record(record, cfg)
    corpus = q.assemble_corpus([docs])
    model = q.fit(corpus, K=3, alpha=cfg.alpha, eta=cfg.eta,
                  max_iter=cfg.max_iter, tol=cfg.tol, seed=cfg.seed)
    series = q.topic_series(model, docs)
    return {"record": record, "cfg": cfg, "docs": docs, "corpus": corpus,
            "model": model, "series": series}


TINY_TEMPLATE = q.EnsembleTemplate(
    n_channels=3,
    sample_rate_hz=50.0,
    duration_range_s=(10.0, 14.0),
    n_phases_range=(2, 3),
    freq_pool_hz=(0.5, 1.5, 2.5, 4.0),
    max_freqs_per_phase=2,
)

TINY_CONFIG = q.PipelineConfig(
    window_s=2.0, hop_s=0.5, f_max_hz=10.0, m=20, K=3, max_iter=40, seed=7,
)


@pytest.fixture(scope="session")
def tiny_session():
    """A fast end-to-end pipeline over a small synthetic ensemble."""
    records = q.generate_ensemble(count=5, seed=11, template=TINY_TEMPLATE)
    return q.run_pipeline(records, TINY_CONFIG)
