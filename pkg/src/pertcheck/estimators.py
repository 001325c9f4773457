"""scikit-learn style wrappers around the pipeline stages."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .fillmask import make_provider
from .judge.deviation import aggregate_deviation
from .metrics.scores import ORACLE, oracle_scores, score_suite
from .perturb.catalog import load_catalog, select_templates
from .perturb.engine import build_pools, generate_suite
from .textkit.lexicon import load_lexicon
from .validation import check_consistent, check_dataset, check_jobs, check_metrics, check_seed


class SuitePerturber(BaseEstimator, TransformerMixin):
    """Turns a dataset into a perturbation test suite.

    fit() loads the catalog and lexicon and builds the distractor pools
    from the fitted dataset; transform() applies every compatible template.
    """

    def __init__(self, catalog=None, seed=7, tasks=None, templates=None, lexicon_dir=None,
                 fill_provider="lexicon", jobs=1):
        self.catalog = catalog
        self.seed = seed
        self.tasks = tasks
        self.templates = templates
        self.lexicon_dir = lexicon_dir
        self.fill_provider = fill_provider
        self.jobs = jobs

    def fit(self, X, y=None):
        samples = check_dataset(X)
        check_seed(self.seed)
        check_jobs(self.jobs)
        specs = self.catalog if isinstance(self.catalog, list) else load_catalog(self.catalog)
        self.catalog_ = select_templates(specs, self.templates, self.tasks)
        self.lexicon_ = load_lexicon(self.lexicon_dir)
        self.pools_ = build_pools(samples)
        if isinstance(self.fill_provider, str):
            self.provider_ = make_provider(self.fill_provider, {"lexicon": self.lexicon_})
        else:
            self.provider_ = self.fill_provider
        return self

    def transform(self, X):
        check_is_fitted(self, "catalog_")
        return generate_suite(check_dataset(X), self.catalog_, check_seed(self.seed), lexicon=self.lexicon_,
                              fill_provider=self.provider_, pools=self.pools_, jobs=check_jobs(self.jobs))


class MetricScorer(BaseEstimator, TransformerMixin):
    """Scores suite items; fit() remembers the dataset holding the references."""

    def __init__(self, metrics=("bleu", "rouge_l", "chrf_pp", "ter"), vectors=None, jobs=1):
        self.metrics = metrics
        self.vectors = vectors
        self.jobs = jobs

    def fit(self, X=None, y=None, dataset=None):
        self.metrics_ = check_metrics(self.metrics, self.vectors)
        self.dataset_ = check_dataset(dataset if dataset is not None else y)
        return self

    def transform(self, X):
        check_is_fitted(self, "dataset_")
        check_consistent(X, self.dataset_)
        return score_suite(X, self.dataset_, self.metrics_, vectors=self.vectors, jobs=check_jobs(self.jobs))


class DeviationScorer(BaseEstimator):
    """Aggregates deviation scores against a penalty table.

    fit(suite, scores) stores ``records_`` and ``gaps_``; predict(suite)
    returns the records; oracle_scores(suite) gives the f == h control.
    """

    def __init__(self, penalties=None):
        self.penalties = penalties

    def fit(self, X, y):
        self.records_, self.gaps_ = aggregate_deviation(X, y, self.penalties)
        return self

    def predict(self, X=None):
        check_is_fitted(self, "records_")
        return list(self.records_)

    def oracle_scores(self, X):
        h = {}
        for it in X.items:
            if it.template_id not in h:
                h[it.template_id] = self.penalties.quality(it.template_id).h_perturbed
        return oracle_scores(X, h)


__all__ = ["DeviationScorer", "MetricScorer", "SuitePerturber", "ORACLE"]
