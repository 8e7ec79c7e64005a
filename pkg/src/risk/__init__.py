# Risk: Monte Carlo and closed-form Kullback-Leibler risk, covariance ensembles
from .estimates import RiskEstimate
from .ensembles import CovarianceEnsemble, DesignInduced, WishartIdentity
from .risk_estimators import (
    bayes_risk,
    bayes_risk_difference,
    closed_form_risk,
    direct_risk,
    phi_estimate,
    phi_monotonicity_check,
    risk_difference,
)
