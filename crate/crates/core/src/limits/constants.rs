//! Closed forms of the limiting speeds and length ratios.
//!
//! Everything derives from the law of one directed stage at intensity 1:
//! the triangle law (T-like kinds) and the Camembert law (Yao-like kinds).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::geometry::DomainShape;
use crate::navigation::NavKind;

/// Law of a directed stage, identified by its decision-domain shape.
pub type StageLaw = DomainShape;

/// Stage law behind a navigation kind.
pub fn stage_law(kind: NavKind) -> StageLaw {
    kind.shape()
}

/// `E(x)`: mean projection of a directed stage on its bisector.
pub fn mean_bisector_projection(law: StageLaw, theta: f64) -> f64 {
    let half = theta / 2.0;
    match law {
        StageLaw::Triangle => 0.5 * (PI / half.tan()).sqrt(),
        StageLaw::Camembert => (2.0 * PI).sqrt() * half.sin() / theta.powf(1.5),
    }
}

/// `E(ξ)`: mean projection on the first border `HL_0`.
pub fn mean_border_projection(law: StageLaw, theta: f64) -> f64 {
    let half = theta / 2.0;
    match law {
        StageLaw::Triangle => (PI * half.cos().powi(3) / (4.0 * half.sin())).sqrt(),
        StageLaw::Camembert => (PI / 2.0).sqrt() * theta.sin() / theta.powf(1.5),
    }
}

/// `E(l)`: mean stage length.
pub fn mean_length(law: StageLaw, theta: f64) -> f64 {
    match law {
        StageLaw::Triangle => mean_bisector_projection(law, theta) * straight_t_ratio(theta),
        StageLaw::Camembert => (PI / (2.0 * theta)).sqrt(),
    }
}

/// `½ (1/cos(θ/2) + asinh(tan(θ/2)) / tan(θ/2))`, the mean of `√(1 + U²)`
/// for `U` uniform on `[-tan(θ/2), tan(θ/2)]`.
fn straight_t_ratio(theta: f64) -> f64 {
    let half = theta / 2.0;
    let tan = half.tan();
    0.5 * (1.0 / half.cos() + tan.asinh() / tan)
}

/// `E(l^g)` where a closed form is known: every `g` for the Camembert law,
/// `g ∈ {0, 1, 2}` for the triangle law.
pub fn closed_form_moment(law: StageLaw, theta: f64, g: f64) -> Option<f64> {
    if g == 0.0 {
        return Some(1.0);
    }
    if g == 1.0 {
        return Some(mean_length(law, theta));
    }
    match law {
        StageLaw::Camembert => Some((2.0 / theta).powf(g / 2.0) * gamma(1.0 + g / 2.0)),
        StageLaw::Triangle if g == 2.0 => {
            let tan = (theta / 2.0).tan();
            Some((1.0 + tan * tan / 3.0) / tan)
        }
        StageLaw::Triangle => None,
    }
}

/// One row of the constants table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub kind: String,
    pub theta: f64,
    /// Limiting speed along the bisector (`C̄`).
    pub c_bis: f64,
    /// Limiting speed along a border (`C̃`), cross and directed kinds.
    pub c_bor: Option<f64>,
    /// Length per unit of bisector progress (`Q̄`).
    pub q_bis: f64,
    /// Length per unit of border progress (`Q̃`), cross and directed kinds.
    pub q_bor: Option<f64>,
    pub e_l: f64,
    pub e_x: f64,
    pub e_xi: Option<f64>,
    /// `E(l²)`.
    pub e_l2: f64,
}

/// Admissible `θ` range of the limit statements for each kind, as
/// `(upper bound, bound included)`.
pub fn theta_range(kind: NavKind) -> (f64, bool) {
    match kind {
        NavKind::Yao | NavKind::T | NavKind::RandomNorthT | NavKind::RandomNorthY => (PI / 3.0, true),
        NavKind::StraightT => (PI / 2.0, true),
        NavKind::StraightYao => (2.0 * PI / 3.0, true),
        NavKind::DirectedT { .. } => (PI, false),
        NavKind::DirectedY { .. } => (PI / 2.0, true),
    }
}

/// Slack on inclusive upper bounds, so that angles typed with four decimals
/// (`1.5708` for π/2) are accepted.
pub const THETA_TOLERANCE: f64 = 1e-4;

pub fn check_theta(kind: NavKind, theta: f64) -> Result<()> {
    let (max, inclusive) = theta_range(kind);
    let tol = THETA_TOLERANCE;
    let ok = theta > 0.0 && if inclusive { theta <= max + tol } else { theta < max };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRangeTheta {
            kind: kind.name().into(),
            theta,
        })
    }
}

/// Closed-form constants of `kind` at angle `theta`.
pub fn constants(kind: NavKind, theta: f64) -> Result<ConstantsRow> {
    check_theta(kind, theta)?;
    let law = stage_law(kind);
    let half = theta / 2.0;
    let e_l = mean_length(law, theta);
    let e_x_dir = mean_bisector_projection(law, theta);
    let e_xi_dir = mean_border_projection(law, theta);
    let e_l2 = closed_form_moment(law, theta, 2.0).expect("g = 2 is closed for both laws");
    let q_bis_formula = match law {
        StageLaw::Triangle => straight_t_ratio(theta),
        StageLaw::Camembert => half / half.sin(),
    };
    let q_bor_formula = match law {
        StageLaw::Triangle => 0.5 * (1.0 / half.cos().powi(2) + half.tan().asinh() / half.sin()),
        StageLaw::Camembert => theta / theta.sin(),
    };
    let row = |c_bis, q_bis, bor: bool| ConstantsRow {
        kind: kind.name().into(),
        theta,
        c_bis,
        c_bor: bor.then_some(e_xi_dir),
        q_bis,
        q_bor: bor.then_some(q_bor_formula),
        e_l,
        e_x: c_bis,
        e_xi: bor.then_some(e_xi_dir),
        e_l2,
    };
    Ok(match kind {
        NavKind::Yao | NavKind::T | NavKind::DirectedT { .. } | NavKind::DirectedY { .. } => {
            row(e_x_dir, q_bis_formula, true)
        }
        NavKind::StraightYao | NavKind::StraightT => row(e_x_dir, q_bis_formula, false),
        NavKind::RandomNorthT => {
            let q = half / (2.0 * half.sin()) * (1.0 / half.cos() + half.tan().asinh() / half.tan());
            row(e_x_dir * half.sin() / half, q, false)
        }
        NavKind::RandomNorthY => {
            let spread = (2.0 - 2.0 * theta.cos()) / (theta * theta);
            row(e_l * spread, theta * theta / (2.0 - 2.0 * theta.cos()), false)
        }
    })
}

/// The constants of several `(kind, θ)` pairs keyed `"kind:theta"`, ready to
/// dump as JSON.
pub fn constants_table(entries: &[(NavKind, f64)]) -> Result<BTreeMap<String, ConstantsRow>> {
    entries
        .iter()
        .map(|&(kind, theta)| Ok((format!("{}:{theta}", kind.name()), constants(kind, theta)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    #[allow(clippy::approx_constant)] // tabulated six-digit values
    fn table_values() {
        let st = constants(NavKind::StraightT, PI / 2.0).unwrap();
        assert!(close(st.q_bis, 1.147794, 1e-6));
        assert!(close(st.c_bis, 0.886227, 1e-6));
        let y = constants(NavKind::Yao, PI / 3.0).unwrap();
        assert!(close(y.q_bis, 1.047198, 1e-6));
        assert!(close(y.q_bor.unwrap(), 1.209200, 1e-6));
        assert!(close(y.e_l, 1.224745, 1e-6));
        assert!(close(y.e_x, 1.169545, 1e-6));
        let t = constants(NavKind::T, PI / 3.0).unwrap();
        assert!(close(t.q_bis, 1.053063, 1e-6));
        assert!(close(t.q_bor.unwrap(), 1.215973, 1e-6));
        assert!(close(t.c_bis, 1.166340, 1e-6));
        assert!(close(t.c_bor.unwrap(), 1.010080, 1e-6));
    }

    #[test]
    fn ratios_are_consistent() {
        for kind in [
            NavKind::Yao,
            NavKind::T,
            NavKind::StraightYao,
            NavKind::StraightT,
            NavKind::RandomNorthT,
            NavKind::RandomNorthY,
        ] {
            for theta in [PI / 6.0, PI / 4.0, PI / 3.0] {
                let r = constants(kind, theta).unwrap();
                assert!(close(r.q_bis, r.e_l / r.e_x, 1e-12), "{kind:?} {theta}");
                if let (Some(q), Some(xi)) = (r.q_bor, r.e_xi) {
                    assert!(close(q, r.e_l / xi, 1e-12), "{kind:?} {theta}");
                }
                assert!(r.c_bis > 0.0 && r.q_bis >= 1.0);
            }
        }
    }

    #[test]
    fn random_north_values() {
        assert!(close(constants(NavKind::RandomNorthT, PI / 3.0).unwrap().q_bis, 1.102765, 1e-6));
        assert!(close(constants(NavKind::RandomNorthY, PI / 3.0).unwrap().q_bis, 1.096623, 1e-6));
    }

    #[test]
    fn moments() {
        let third = PI / 3.0;
        assert!(close(closed_form_moment(StageLaw::Camembert, third, 2.0).unwrap(), 6.0 / PI, 1e-12));
        assert!(close(closed_form_moment(StageLaw::Triangle, PI / 2.0, 2.0).unwrap(), 4.0 / 3.0, 1e-12));
        assert!(closed_form_moment(StageLaw::Triangle, third, 3.0).is_none());
    }

    #[test]
    #[allow(clippy::approx_constant)] // 1.5708 exercises the θ tolerance
    fn out_of_range() {
        assert!(matches!(constants(NavKind::T, PI / 2.0), Err(Error::OutOfRangeTheta { .. })));
        assert!(constants(NavKind::StraightT, 2.0).is_err());
        assert!((constants(NavKind::StraightT, 1.5708).unwrap().q_bis - 1.147794).abs() < 1e-5);
        assert!(constants(NavKind::StraightYao, 2.0).is_ok());
        assert!(constants(NavKind::DirectedT { alpha: 0.0 }, PI).is_err());
        let table = constants_table(&[(NavKind::StraightT, PI / 2.0)]).unwrap();
        assert_eq!(table.len(), 1);
    }
}
