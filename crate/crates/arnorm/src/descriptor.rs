//! String descriptors for alternative laws `H`:
//!
//! | descriptor          | law                                        |
//! |---------------------|--------------------------------------------|
//! | `gauss-scale:c`     | `Φ(x/(c·σ₀))`                              |
//! | `gauss:s`           | `Φ(x/s)`                                   |
//! | `laplace:var`       | centered Laplace with variance `var`       |
//! | `uniform:var`       | centered uniform with variance `var`       |
//! | `student:df,var`    | Student-t, `df > 2`, rescaled to `var`     |
//! | `twopoint:a`        | `±a` with probability 1/2 each             |
//!
//! Every [`LawH::describe`] output of these laws parses back to the same law.

use std::sync::Arc;

use arnorm_core::{GaussianLaw, LaplaceLaw, LawH, TwoPointLaw, UniformLaw};

use crate::error::{CliError, Result};
use crate::student::StudentLaw;

pub fn parse_law(desc: &str, sigma0: f64) -> Result<Arc<dyn LawH>> {
    let bad = |msg: String| CliError::Usage(format!("invalid H descriptor {desc:?}: {msg}"));
    let (name, args) = desc
        .trim()
        .split_once(':')
        .ok_or_else(|| bad("expected <family>:<parameters>".into()))?;
    let nums: Vec<f64> = args
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| bad(e.to_string()))?;
    let want = |k: usize| {
        if nums.len() == k {
            Ok(())
        } else {
            Err(bad(format!("{name} takes {k} parameter(s), got {}", nums.len())))
        }
    };
    fn core<L: LawH + 'static>(r: arnorm_core::Result<L>, desc: &str) -> Result<Arc<dyn LawH>> {
        r.map(|l| Arc::new(l) as Arc<dyn LawH>)
            .map_err(|e| CliError::Usage(format!("invalid H descriptor {desc:?}: {e}")))
    }
    let law: Arc<dyn LawH> = match name {
        "gauss-scale" => {
            want(1)?;
            core(GaussianLaw::new(nums[0] * sigma0), desc)?
        }
        "gauss" => {
            want(1)?;
            core(GaussianLaw::new(nums[0]), desc)?
        }
        "laplace" => {
            want(1)?;
            core(LaplaceLaw::new(nums[0]), desc)?
        }
        "uniform" => {
            want(1)?;
            core(UniformLaw::new(nums[0]), desc)?
        }
        "student" => {
            want(2)?;
            Arc::new(StudentLaw::new(nums[0], nums[1]).map_err(bad)?)
        }
        "twopoint" => {
            want(1)?;
            core(TwoPointLaw::new(nums[0]), desc)?
        }
        other => return Err(bad(format!("unknown family {other:?}"))),
    };
    Ok(law)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        let cases = [
            ("gauss-scale:3", 9.0),
            ("gauss:2", 4.0),
            ("laplace:4", 4.0),
            ("uniform:0.5", 0.5),
            ("student:5,2", 2.0),
            ("twopoint:1.5", 2.25),
        ];
        for (desc, var) in cases {
            let law = parse_law(desc, 1.0).unwrap();
            assert!((law.variance() - var).abs() < 1e-12, "{desc}");
            let again = parse_law(&law.describe(), 1.0).unwrap();
            assert_eq!(again.describe(), law.describe());
        }
        assert!((parse_law("gauss-scale:3", 2.0).unwrap().variance() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_garbage() {
        for desc in ["", "laplace", "laplace:x", "laplace:-1", "student:5", "cauchy:1", "twopoint:1,2"] {
            let err = parse_law(desc, 1.0).unwrap_err();
            assert!(matches!(err, CliError::Usage(_)), "{desc}");
        }
    }

    #[test]
    fn two_point_flags_missing_density() {
        assert!(!parse_law("twopoint:1", 1.0).unwrap().lipschitz_density());
        assert!(parse_law("laplace:1", 1.0).unwrap().lipschitz_density());
    }
}
