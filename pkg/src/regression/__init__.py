# Regression: reduction of Normal linear regression to the Normal mean problem
from .designs import DesignDistribution, draw_design, with_intercept
from .regression import (
    AstarRegressionPrior,
    FutureDesign,
    ReducedProblem,
    RegressionData,
    RegressionPredictive,
    astar_regression_prior,
    load_future_csv,
    load_regression_csv,
    reduce,
    reduce_future,
    reduce_problem,
    regression_predictive,
    regression_predictive_logpdf,
    ridge_estimator,
    three_point_data,
)
