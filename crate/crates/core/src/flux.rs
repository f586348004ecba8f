//! Global Lax-Friedrichs splitting and the characteristic-wise WENO flux
//! difference operators `L` (upwind) and `L~` (downwind).

use crate::error::{Result, SolverError};
use crate::exec;
use crate::linalg::{mat_vec, State};
use crate::mesh::FieldArray;
use crate::physics::{at_location, Physics};
use crate::reconstruction::{reconstruct_left, reconstruct_right, ReconstructionConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitFluxPair<const M: usize> {
    pub f_plus: State<M>,
    pub f_minus: State<M>,
}

/// `F± = (U ± F/alpha) / 2`.
#[inline]
pub fn lf_split<const M: usize>(u: &State<M>, f: &State<M>, alpha: f64) -> SplitFluxPair<M> {
    let mut f_plus = [0.0; M];
    let mut f_minus = [0.0; M];
    for k in 0..M {
        let g = f[k] / alpha;
        f_plus[k] = 0.5 * (u[k] + g);
        f_minus[k] = 0.5 * (u[k] - g);
    }
    SplitFluxPair { f_plus, f_minus }
}

/// The downwind splitting swaps the two halves.
#[inline]
pub fn downwind_split<const M: usize>(u: &State<M>, f: &State<M>, alpha: f64) -> SplitFluxPair<M> {
    let s = lf_split(u, f, alpha);
    SplitFluxPair { f_plus: s.f_minus, f_minus: s.f_plus }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bias {
    Upwind,
    Downwind,
}

/// Largest characteristic speed over `values`; `x_of(i)` locates failures.
pub fn max_wave_speed<const M: usize>(
    physics: &dyn Physics<M>,
    values: &[State<M>],
    x_of: impl Fn(usize) -> f64,
) -> Result<f64> {
    let mut alpha = 0.0_f64;
    for (i, u) in values.iter().enumerate() {
        let s = physics.max_speed(u).map_err(|e| at_location(e, x_of(i)))?;
        if !s.is_finite() {
            return Err(SolverError::NonHyperbolic { x: x_of(i), reason: "non-finite wave speed".into() });
        }
        alpha = alpha.max(s);
    }
    Ok(alpha)
}

/// Maximum of `|lambda|` over the interior points of `field`.
pub fn global_alpha<const M: usize>(field: &FieldArray<M>, physics: &dyn Physics<M>) -> Result<f64> {
    let g = *field.grid();
    let alpha = max_wave_speed(physics, field.interior(), |i| g.x(i as isize))?;
    if alpha > 0.0 {
        Ok(alpha)
    } else {
        Err(SolverError::DegenerateWaveSpeed)
    }
}

/// Numerical flux at the interface between storage points `i` and `i + 1`.
#[inline]
#[allow(clippy::too_many_arguments)]
fn interface_flux<const M: usize>(
    physics: &dyn Physics<M>,
    values: &[State<M>],
    fluxes: &[State<M>],
    i: usize,
    alpha: f64,
    cfg: &ReconstructionConfig,
    bias: Bias,
) -> Result<State<M>> {
    let r = cfg.half_width();
    let mut avg = [0.0; M];
    for k in 0..M {
        avg[k] = 0.5 * (values[i][k] + values[i + 1][k]);
    }
    let es = physics.eigensystem(&avg)?;

    // Split characteristic values at the 2r stencil points i-r+1 ..= i+r.
    let mut plus = [[0.0; 8]; M];
    let mut minus = [[0.0; 8]; M];
    for p in 0..2 * r {
        let idx = i + 1 + p - r;
        let w = mat_vec(&es.left, &values[idx]);
        let fw = mat_vec(&es.left, &fluxes[idx]);
        let s = lf_split(&w, &fw, alpha);
        for c in 0..M {
            plus[c][p] = s.f_plus[c];
            minus[c][p] = s.f_minus[c];
        }
    }

    let len = 2 * r - 1;
    let mut chi = [0.0; M];
    for c in 0..M {
        chi[c] = match bias {
            Bias::Upwind => alpha * (reconstruct_left(&plus[c][..len], cfg) - reconstruct_right(&minus[c][1..=len], cfg)),
            // F~+ = F-, F~- = F+, and the bracket changes sign.
            Bias::Downwind => -alpha * (reconstruct_left(&minus[c][..len], cfg) - reconstruct_right(&plus[c][1..=len], cfg)),
        };
    }
    Ok(mat_vec(&es.right, &chi))
}

/// Flux difference operator on one grid line.
///
/// `values` holds `ghost` points, then `n` interior points, then `ghost`
/// points. Returns `-(F_{j+1/2} - F_{j-1/2})/dx` for the interior points.
/// `x_first` is the coordinate of `values[0]` and only locates errors.
#[allow(clippy::too_many_arguments)]
pub fn line_operator<const M: usize>(
    physics: &dyn Physics<M>,
    values: &[State<M>],
    ghost: usize,
    dx: f64,
    x_first: f64,
    alpha: f64,
    cfg: &ReconstructionConfig,
    bias: Bias,
    parallel: bool,
) -> Result<Vec<State<M>>> {
    let r = cfg.half_width();
    if ghost < r {
        return Err(SolverError::InvalidDimension(format!("{r} ghost points needed, grid has {ghost}")));
    }
    let n = values.len() - 2 * ghost;
    let fluxes: Vec<State<M>> = values.iter().map(|u| physics.flux(u)).collect();
    // interface k sits between storage points ghost-1+k and ghost+k, k = 0..=n
    let one = |k: usize| {
        let i = ghost - 1 + k;
        interface_flux(physics, values, &fluxes, i, alpha, cfg, bias).map_err(|e| at_location(e, x_first + (i as f64 + 0.5) * dx))
    };
    let faces: Vec<State<M>> = if parallel {
        exec::try_map_range(n + 1, one)?
    } else {
        (0..=n).map(one).collect::<Result<_>>()?
    };
    let inv = 1.0 / dx;
    Ok((0..n)
        .map(|j| {
            let mut out = [0.0; M];
            for c in 0..M {
                out[c] = -(faces[j + 1][c] - faces[j][c]) * inv;
            }
            out
        })
        .collect())
}

/// `L(U)` or `L~(U)` on the interior of a field with filled ghosts.
pub fn semidiscrete<const M: usize>(
    field: &FieldArray<M>,
    physics: &dyn Physics<M>,
    alpha: f64,
    cfg: &ReconstructionConfig,
    bias: Bias,
) -> Result<FieldArray<M>> {
    let g = *field.grid();
    let values = line_operator(physics, field.raw(), g.ghost(), g.dx(), g.x(-(g.ghost() as isize)), alpha, cfg, bias, true)?;
    FieldArray::from_interior(g, &values)
}

pub fn semidiscrete_upwind<const M: usize>(
    field: &FieldArray<M>,
    physics: &dyn Physics<M>,
    alpha: f64,
    cfg: &ReconstructionConfig,
) -> Result<FieldArray<M>> {
    semidiscrete(field, physics, alpha, cfg, Bias::Upwind)
}

pub fn semidiscrete_downwind<const M: usize>(
    field: &FieldArray<M>,
    physics: &dyn Physics<M>,
    alpha: f64,
    cfg: &ReconstructionConfig,
) -> Result<FieldArray<M>> {
    semidiscrete(field, physics, alpha, cfg, Bias::Downwind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_grid, fill_periodic_ghosts};
    use crate::physics::{Burgers, Euler1d, LinearAdvection};

    #[test]
    fn splitting_identities() {
        let s = lf_split(&[2.0], &[2.0], 2.0);
        assert_eq!(s.f_plus, [1.5]);
        assert_eq!(s.f_minus, [0.5]);
        let d = downwind_split(&[2.0], &[2.0], 2.0);
        assert_eq!(d.f_plus, [0.5]);
        assert_eq!(d.f_minus, [1.5]);
        assert_eq!(lf_split(&[0.0], &[0.0], 1.0).f_plus, [0.0]);
    }

    #[test]
    fn alpha_examples() {
        let g = build_grid(0.0, 1.0, 6, 3).unwrap();
        let f = FieldArray::from_interior(g, &[[1.0], [-1.0], [0.5], [0.0], [0.2], [0.1]]).unwrap();
        assert_eq!(global_alpha(&f, &Burgers).unwrap(), 1.0);
        assert_eq!(global_alpha(&f, &LinearAdvection { speed: 1.0 }).unwrap(), 1.0);
        let zero = FieldArray::<1>::zeros(g);
        assert_eq!(global_alpha(&zero, &Burgers), Err(SolverError::DegenerateWaveSpeed));
        let e = Euler1d::default();
        let f = FieldArray::from_fn(g, |_| e.from_primitive(1.0, 1.0, 2.0));
        assert!((global_alpha(&f, &e).unwrap() - 2.673_320_053_1).abs() < 1e-9);
    }

    #[test]
    fn constant_field_has_zero_operator() {
        let e = Euler1d::default();
        let g = build_grid(0.0, 1.0, 20, 3).unwrap();
        let mut f = FieldArray::from_fn(g, |_| e.from_primitive(1.0, 0.3, 2.0));
        fill_periodic_ghosts(&mut f);
        for bias in [Bias::Upwind, Bias::Downwind] {
            let l = semidiscrete(&f, &e, 2.0, &ReconstructionConfig::weno5(), bias).unwrap();
            assert!(l.interior().iter().flatten().all(|v| v.abs() < 1e-13));
        }
    }

    #[test]
    fn negative_pressure_is_located() {
        let e = Euler1d::default();
        let g = build_grid(0.0, 1.0, 10, 3).unwrap();
        let mut f = FieldArray::from_fn(g, |x| if x > 0.5 { [1.0, 0.0, -1.0] } else { e.from_primitive(1.0, 0.0, 1.0) });
        fill_periodic_ghosts(&mut f);
        let err = semidiscrete_upwind(&f, &e, 1.0, &ReconstructionConfig::weno5()).unwrap_err();
        assert!(matches!(err, SolverError::NonHyperbolic { x, .. } if x > 0.4 && x < 0.7));
    }
}
