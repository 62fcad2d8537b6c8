use arnorm_core::LawH;
use rand::RngCore;
use rand_distr::{Distribution, StudentT};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Student-t with `df > 2` degrees of freedom, rescaled to a given variance.
#[derive(Debug, Clone)]
pub struct StudentLaw {
    df: f64,
    variance: f64,
    scale: f64,
    cdf: StudentsT,
    sampler: StudentT<f64>,
}

impl StudentLaw {
    pub fn new(df: f64, variance: f64) -> Result<Self, String> {
        if !(df.is_finite() && df > 2.0) {
            return Err(format!("student law needs finite df > 2, got {df}"));
        }
        if !(variance.is_finite() && variance > 0.0) {
            return Err(format!("variance must be finite and > 0, got {variance}"));
        }
        // a standard t has variance df / (df − 2)
        let scale = (variance * (df - 2.0) / df).sqrt();
        Ok(Self {
            df,
            variance,
            scale,
            cdf: StudentsT::new(0.0, 1.0, df).map_err(|e| e.to_string())?,
            sampler: StudentT::new(df).map_err(|e| e.to_string())?,
        })
    }
}

impl LawH for StudentLaw {
    fn cdf(&self, x: f64) -> f64 {
        self.cdf.cdf(x / self.scale)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.scale * self.sampler.sample(rng)
    }

    fn variance(&self) -> f64 {
        self.variance
    }

    fn lipschitz_density(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("student:{},{}", self.df, self.variance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use arnorm_core::ar_process::validate_law;

    #[test]
    fn rejects_bad_parameters() {
        assert!(StudentLaw::new(2.0, 1.0).is_err());
        assert!(StudentLaw::new(5.0, 0.0).is_err());
    }

    #[test]
    fn passes_law_checks() {
        let law = StudentLaw::new(6.0, 2.0).unwrap();
        assert!((law.cdf(0.0) - 0.5).abs() < 1e-12);
        validate_law(&law, 3).unwrap();
    }
}
