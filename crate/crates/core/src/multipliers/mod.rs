//! Symbols, weights and Fourier multipliers, and randomized checks of the
//! inequalities they satisfy.

mod lemmas;
mod multiplier;
pub(crate) use multiplier::{a_time_derivative_at, log_multiplier_a_at};
mod params;
mod symbols;
mod weight;

pub use lemmas::{
    classify_trichotomy, continuity_sweep, sample_lemma_ratios, sample_trichotomy,
    separation_constant, tower_check, wv_over_w_sup, LemmaError, RatioReport, TowerReport,
    TrichotomyCases, TrichotomyReport, ETA_RANGE, K_RANGE, LEMMA_IDS, T_RANGE,
};
pub use multiplier::{
    a_time_derivative, dt_m_over_m, japanese, log_multiplier_a, log_multiplier_j, multiplier_a,
    multiplier_j, multiplier_m, AVariant, ATimeDerivative, JVariant,
};
pub use params::{MultiplierParams, ParamError, ParamsBuilder};
pub use symbols::{
    critical_interval, critical_time, dt_p_symbol, dtdtp_ratio, dtp_over_kp, floor_sqrt,
    in_critical, in_resonant, interval_index, p_symbol, CriticalInterval, SymbolError,
};
pub use weight::{junction_mismatch, weight_nr, weight_w, weight_wv, Branch, WeightError, WeightValue};
