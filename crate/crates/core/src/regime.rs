//! Hypothesis sets under which the identities and bounds apply.

use serde::Serialize;

/// Which hypothesis sets a parameter tuple satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeReport {
    /// `d < q` and `1 <= s <= d - 2`.
    pub identity: bool,
    /// `2(s + 1) <= d`.
    pub symbolic: bool,
    /// `q > d` and `2(s + 1) <= d`, plus `d - s + 1 <= r <= d` when `r` is given.
    pub chi_estimate: bool,
    /// `q > d` and `1 <= s <= d/2 - 1`.
    pub main: bool,
    /// `1 <= s <= d/2 - 3`.
    pub restricted: bool,
}

pub fn validate_regime(q: u64, d: u64, s: u64, r: Option<u64>) -> RegimeReport {
    let identity = d < q && s >= 1 && s + 2 <= d;
    let symbolic = 2 * (s + 1) <= d;
    let r_ok = r.is_none_or(|r| r + s > d && r <= d);
    // s <= d/2 - 1 over the rationals is 2s + 2 <= d
    let main = q > d && s >= 1 && 2 * s + 2 <= d;
    RegimeReport {
        identity,
        symbolic,
        chi_estimate: q > d && symbolic && r_ok,
        main,
        restricted: main && 2 * s + 6 <= d,
    }
}

impl RegimeReport {
    /// Names of the satisfied hypothesis sets.
    pub fn satisfied(&self) -> Vec<&'static str> {
        [
            ("identity", self.identity),
            ("symbolic", self.symbolic),
            ("chi-estimate", self.chi_estimate),
            ("main", self.main),
            ("restricted", self.restricted),
        ]
        .into_iter()
        .filter_map(|(n, ok)| ok.then_some(n))
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = validate_regime(7, 3, 1, None);
        assert!(r.identity && !r.symbolic && !r.main);
        let r = validate_regime(11, 6, 2, Some(5));
        assert!(r.identity && r.symbolic && r.chi_estimate && r.main);
        assert!(!validate_regime(5, 6, 1, None).identity);
    }

    #[test]
    fn implications_hold() {
        for q in 2..30 {
            for d in 1..30 {
                for s in 0..d {
                    let r = validate_regime(q, d, s, None);
                    assert!(!r.main || r.chi_estimate);
                    assert!(!r.restricted || r.main);
                }
            }
        }
    }
}
