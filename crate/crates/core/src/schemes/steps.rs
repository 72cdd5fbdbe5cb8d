//! One-step maps of every scheme. Each takes the current state and the
//! parameters for this `n` and returns the next state; none of them
//! validates the schedule, that is the run driver's job.

use crate::error::{Error, Result};
use crate::operators::{IdentityMap, IsmOperator, Mapping, MaximalMonotone, StrictPseudocontraction};
use crate::scalar::Scalar;
use crate::sets::ConvexSet;
use crate::space::{combine, Vector};

/// Intermediate points of the last step, measured from its starting point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepAux<S> {
    /// Inner averaged point `y_n`.
    pub y: Option<Vector<S>>,
    /// Forward-backward point `t_n = P_C(x_n - lambda_n A x_n)`.
    pub t: Option<Vector<S>>,
    /// `T t_n`.
    pub tt: Option<Vector<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationState<S> {
    pub n: usize,
    pub x: Vector<S>,
    pub aux: StepAux<S>,
}

impl<S: Scalar> IterationState<S> {
    pub fn start(x0: Vector<S>) -> Self {
        Self {
            n: 0,
            x: x0,
            aux: StepAux::default(),
        }
    }

    fn advance(&self, x: Vector<S>, aux: StepAux<S>) -> Self {
        Self { n: self.n + 1, x, aux }
    }
}

fn check_params<S: Scalar>(lambda: S, alpha: S) -> Result<()> {
    if lambda.is_finite() && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            context: "step parameters",
        })
    }
}

/// `P_C(x - lambda A x)`.
pub fn forward_backward<S: Scalar>(
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    x: &Vector<S>,
    lambda: S,
) -> Result<Vector<S>> {
    set.project(&x.axpy(-lambda, &a.apply_ism(x)?)?)
}

/// The new extragradient process:
/// `t_n = P_C(x_n - lambda_n A x_n)`,
/// `y_n = alpha_n x_n + (1 - alpha_n) T t_n`,
/// `x_{n+1} = T P_C(y_n - lambda_n A y_n)`.
pub fn step_ko<S: Scalar>(
    state: &IterationState<S>,
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    t_map: &impl Mapping<S>,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(lambda, alpha)?;
    let x = &state.x;
    let t = forward_backward(set, a, x, lambda)?;
    let tt = t_map.apply(&t)?;
    let y = combine(alpha, x, S::one() - alpha, &tt)?;
    let next = t_map.apply(&forward_backward(set, a, &y, lambda)?)?;
    Ok(state.advance(
        next,
        StepAux {
            y: Some(y),
            t: Some(t),
            tt: Some(tt),
        },
    ))
}

/// The process with `T = I`.
pub fn step_ko_no_t<S: Scalar>(
    state: &IterationState<S>,
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    step_ko(state, set, a, &IdentityMap, lambda, alpha)
}

/// `x_{n+1} = alpha_n x_n + (1 - alpha_n) T P_C(x_n - lambda_n A x_n)`.
pub fn step_tt<S: Scalar>(
    state: &IterationState<S>,
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    t_map: &impl Mapping<S>,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(lambda, alpha)?;
    let x = &state.x;
    let t = forward_backward(set, a, x, lambda)?;
    let tt = t_map.apply(&t)?;
    let next = combine(alpha, x, S::one() - alpha, &tt)?;
    Ok(state.advance(
        next,
        StepAux {
            y: None,
            t: Some(t),
            tt: Some(tt),
        },
    ))
}

/// Extragradient step with a nonexpansive outer map `S`:
/// `y_n = P_C(x_n - lambda_n A x_n)`,
/// `x_{n+1} = alpha_n x_n + (1 - alpha_n) S P_C(x_n - lambda_n A y_n)`.
///
/// The predictor `y_n` is recorded in the `t` slot.
pub fn step_nt<S: Scalar>(
    state: &IterationState<S>,
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    s_map: &impl Mapping<S>,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(lambda, alpha)?;
    let x = &state.x;
    let predictor = forward_backward(set, a, x, lambda)?;
    let corrected = set.project(&x.axpy(-lambda, &a.apply_ism(&predictor)?)?)?;
    let s_corrected = s_map.apply(&corrected)?;
    let next = combine(alpha, x, S::one() - alpha, &s_corrected)?;
    Ok(state.advance(
        next,
        StepAux {
            y: None,
            t: Some(predictor),
            tt: None,
        },
    ))
}

/// Same as [`step_nt`] but with the corrector `P_C(x_n - lambda_n y_n)`,
/// i.e. without `A` applied to the predictor.
pub fn step_nt_literal<S: Scalar>(
    state: &IterationState<S>,
    set: &ConvexSet<S>,
    a: &IsmOperator<S>,
    s_map: &impl Mapping<S>,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(lambda, alpha)?;
    let x = &state.x;
    let predictor = forward_backward(set, a, x, lambda)?;
    let corrected = set.project(&x.axpy(-lambda, &predictor)?)?;
    let s_corrected = s_map.apply(&corrected)?;
    let next = combine(alpha, x, S::one() - alpha, &s_corrected)?;
    Ok(state.advance(
        next,
        StepAux {
            y: None,
            t: Some(predictor),
            tt: None,
        },
    ))
}

/// `y_n = alpha_n x_n + (1 - alpha_n) T x_n`, `x_{n+1} = T y_n`.
pub fn step_picard_mann<S: Scalar>(
    state: &IterationState<S>,
    t_map: &impl Mapping<S>,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(S::zero(), alpha)?;
    let x = &state.x;
    let y = combine(alpha, x, S::one() - alpha, &t_map.apply(x)?)?;
    let next = t_map.apply(&y)?;
    Ok(state.advance(
        next,
        StepAux {
            y: Some(y),
            t: None,
            tt: None,
        },
    ))
}

/// The process with `T P_C` replaced by the resolvent `J_r^B` and `C = H`:
/// `y_n = alpha_n x_n + (1 - alpha_n) J_r(x_n - lambda_n A x_n)`,
/// `x_{n+1} = J_r(y_n - lambda_n A y_n)`.
pub fn step_resolvent_ko<S: Scalar>(
    state: &IterationState<S>,
    b: &MaximalMonotone<S>,
    a: &IsmOperator<S>,
    r: S,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(lambda, alpha)?;
    let x = &state.x;
    let t = b.resolvent(r, &x.axpy(-lambda, &a.apply_ism(x)?)?)?;
    let y = combine(alpha, x, S::one() - alpha, &t)?;
    let next = b.resolvent(r, &y.axpy(-lambda, &a.apply_ism(&y)?)?)?;
    Ok(state.advance(
        next,
        StepAux {
            y: Some(y),
            t: Some(t.clone()),
            tt: Some(t),
        },
    ))
}

/// Process for a nonexpansive `T` and a strict pseudocontraction `S`:
/// `y_n = alpha_n x_n + (1 - alpha_n) T((1 - lambda_n) x_n + lambda_n S x_n)`,
/// `x_{n+1} = T((1 - lambda_n) y_n + lambda_n S y_n)`.
pub fn step_pseudo_ko<S: Scalar>(
    state: &IterationState<S>,
    t_map: &impl Mapping<S>,
    s: &StrictPseudocontraction<S>,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(lambda, alpha)?;
    let x = &state.x;
    let t = combine(S::one() - lambda, x, lambda, &s.apply_s(x)?)?;
    let tt = t_map.apply(&t)?;
    let y = combine(alpha, x, S::one() - alpha, &tt)?;
    let inner = combine(S::one() - lambda, &y, lambda, &s.apply_s(&y)?)?;
    let next = t_map.apply(&inner)?;
    Ok(state.advance(
        next,
        StepAux {
            y: Some(y),
            t: Some(t),
            tt: Some(tt),
        },
    ))
}

/// The process on the whole space:
/// `y_n = alpha_n x_n + (1 - alpha_n) T(x_n - lambda_n A x_n)`,
/// `x_{n+1} = T(y_n - lambda_n A y_n)`.
pub fn step_resolvent_free<S: Scalar>(
    state: &IterationState<S>,
    a: &IsmOperator<S>,
    t_map: &impl Mapping<S>,
    lambda: S,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(lambda, alpha)?;
    let x = &state.x;
    let t = x.axpy(-lambda, &a.apply_ism(x)?)?;
    let tt = t_map.apply(&t)?;
    let y = combine(alpha, x, S::one() - alpha, &tt)?;
    let next = t_map.apply(&y.axpy(-lambda, &a.apply_ism(&y)?)?)?;
    Ok(state.advance(
        next,
        StepAux {
            y: Some(y),
            t: Some(t),
            tt: Some(tt),
        },
    ))
}

/// Mann baseline: `x_{n+1} = alpha_n x_n + (1 - alpha_n) T x_n`.
pub fn step_mann<S: Scalar>(state: &IterationState<S>, t_map: &impl Mapping<S>, alpha: S) -> Result<IterationState<S>> {
    check_params(S::zero(), alpha)?;
    let x = &state.x;
    let next = combine(alpha, x, S::one() - alpha, &t_map.apply(x)?)?;
    Ok(state.advance(next, StepAux::default()))
}

/// Ishikawa baseline with both levels driven by `alpha_n`:
/// `y_n = alpha_n x_n + (1 - alpha_n) T x_n`,
/// `x_{n+1} = alpha_n x_n + (1 - alpha_n) T y_n`.
pub fn step_ishikawa<S: Scalar>(
    state: &IterationState<S>,
    t_map: &impl Mapping<S>,
    alpha: S,
) -> Result<IterationState<S>> {
    check_params(S::zero(), alpha)?;
    let x = &state.x;
    let y = combine(alpha, x, S::one() - alpha, &t_map.apply(x)?)?;
    let next = combine(alpha, x, S::one() - alpha, &t_map.apply(&y)?)?;
    Ok(state.advance(
        next,
        StepAux {
            y: Some(y),
            t: None,
            tt: None,
        },
    ))
}
