use stochastic_core::StoppingSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FiniteDifference,
    DriverExpectation,
    ClosedForm,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::FiniteDifference => "finite_difference",
            Method::DriverExpectation => "driver_expectation",
            Method::ClosedForm => "closed_form",
        }
    }
}

/// Where a rate is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instant {
    Time(f64),
    Stopping,
}

/// Evaluation point handed to an estimator.
#[derive(Debug, Clone, Copy)]
pub enum At<'a> {
    Time(f64),
    Index(usize),
    Stopping(&'a StoppingSample),
}

/// Fit of the difference quotients `D(ε)` against `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub intercept: f64,
    pub slope: f64,
    /// Mean difference quotient per ε, aligned with `RateEstimate::epsilons`.
    pub quotients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    pub instant: Instant,
    pub epsilons: Vec<f64>,
    pub extrapolation: Option<Extrapolation>,
    pub n_samples: usize,
    pub hit_probability: Option<f64>,
}

impl RateEstimate {
    pub fn closed_form(value: f64, instant: Instant) -> RateEstimate {
        RateEstimate {
            value,
            std_error: 0.0,
            method: Method::ClosedForm,
            instant,
            epsilons: Vec::new(),
            extrapolation: None,
            n_samples: 0,
            hit_probability: None,
        }
    }

    pub fn combined_se(&self, other: &RateEstimate) -> f64 {
        self.std_error.hypot(other.std_error)
    }

    /// `|a − b| ≤ k·√(se_a² + se_b²)`.
    pub fn agrees_with(&self, other: &RateEstimate, k: f64) -> bool {
        (self.value - other.value).abs() <= k * self.combined_se(other)
    }

    /// `|value − target| ≤ k·se`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }
}
