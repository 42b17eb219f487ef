use std::collections::BTreeMap;

use num::Zero;

use crate::algebra::{axis_name, cross, dot, vector, FormalSymbol, Kind, OperatorPoly, PotentialAtom, Space, SymbolFamily};
use crate::coeff::{Coeff, Rational};

use super::{Expr, LowerError, Pos, VExpr};

/// Expands vector operations into components and normal-orders the result.
pub fn lower(e: &Expr, space: Space) -> Result<OperatorPoly, LowerError> {
    Ok(match e {
        Expr::Number(n) => OperatorPoly::constant(space, Coeff::real(n.clone())),
        Expr::ImaginaryUnit => OperatorPoly::constant(space, Coeff::i()),
        Expr::Component { vector: VExpr::Symbol(family), axis, pos } => {
            let max = if *family == SymbolFamily::Rotation && space.dim >= 2 { 3 } else { space.dim };
            if *axis > max {
                return Err(LowerError::AxisOutOfRange { pos: *pos, axis: axis_name(*axis), dim: space.dim });
            }
            OperatorPoly::symbol(space, FormalSymbol { family: *family, axis: *axis })
        }
        Expr::Component { vector, axis, pos } => {
            if *axis > space.dim {
                return Err(LowerError::AxisOutOfRange { pos: *pos, axis: axis_name(*axis), dim: space.dim });
            }
            lower_vector(vector, space)?.swap_remove(*axis - 1)
        }
        Expr::Add(a, b) => lower(a, space)?.add(&lower(b, space)?)?,
        Expr::Sub(a, b) => lower(a, space)?.sub(&lower(b, space)?)?,
        Expr::Neg(a) => lower(a, space)?.neg(),
        Expr::Mul(a, b) => lower(a, space)?.mul(&lower(b, space)?)?,
        Expr::Div(a, d) => lower(a, space)?.scale_rational(&(Rational::from_integer(1.into()) / d)),
        Expr::Pow(a, k) => lower(a, space)?.pow(*k)?,
        Expr::Dot(a, b) => dot(&lower_vector(a, space)?, &lower_vector(b, space)?)?,
        Expr::NormFn { name, arg, pos } => {
            let mut coeffs = BTreeMap::new();
            let mut shift = Rational::zero();
            linear_positions(arg, &Rational::from_integer(1.into()), space, *pos, &mut coeffs, &mut shift)?;
            let atom = PotentialAtom::with_shift(name.clone(), coeffs.into_iter().collect(), shift)?;
            OperatorPoly::atom(space, atom)?
        }
    })
}

fn lower_vector(v: &VExpr, space: Space) -> Result<Vec<OperatorPoly>, LowerError> {
    let pair = |a: &VExpr, b: &VExpr| -> Result<(Vec<OperatorPoly>, Vec<OperatorPoly>), LowerError> {
        Ok((lower_vector(a, space)?, lower_vector(b, space)?))
    };
    Ok(match v {
        VExpr::Particle { kind, particle, pos } => {
            check_particle(*particle, space, *pos)?;
            vector(space, *kind, *particle)?
        }
        VExpr::Symbol(family) => {
            (1..=space.dim).map(|axis| OperatorPoly::symbol(space, FormalSymbol { family: *family, axis })).collect()
        }
        VExpr::Add(a, b) => {
            let (a, b) = pair(a, b)?;
            a.iter().zip(&b).map(|(x, y)| x.add(y)).collect::<Result<_, _>>()?
        }
        VExpr::Sub(a, b) => {
            let (a, b) = pair(a, b)?;
            a.iter().zip(&b).map(|(x, y)| x.sub(y)).collect::<Result<_, _>>()?
        }
        VExpr::Neg(a) => lower_vector(a, space)?.iter().map(|x| x.neg()).collect(),
        VExpr::Scale(r, a) => lower_vector(a, space)?.iter().map(|x| x.scale_rational(r)).collect(),
        VExpr::Cross(a, b, pos) => {
            if space.dim != 3 {
                return Err(LowerError::CrossDimension { pos: *pos, dim: space.dim });
            }
            let (a, b) = pair(a, b)?;
            cross(&a, &b)?
        }
    })
}

fn check_particle(particle: usize, space: Space, pos: Pos) -> Result<(), LowerError> {
    if particle > space.particles {
        return Err(LowerError::ParticleOutOfRange { pos, particle, particles: space.particles });
    }
    Ok(())
}

/// Collects `Σ c_j z_j + shift·a`; anything else is rejected.
fn linear_positions(
    v: &VExpr,
    scale: &Rational,
    space: Space,
    pos: Pos,
    coeffs: &mut BTreeMap<usize, Rational>,
    shift: &mut Rational,
) -> Result<(), LowerError> {
    match v {
        VExpr::Particle { kind: Kind::Position, particle, pos } => {
            check_particle(*particle, space, *pos)?;
            *coeffs.entry(*particle).or_insert_with(Rational::zero) += scale;
        }
        VExpr::Symbol(SymbolFamily::Translation) => *shift += scale,
        VExpr::Add(a, b) => {
            linear_positions(a, scale, space, pos, coeffs, shift)?;
            linear_positions(b, scale, space, pos, coeffs, shift)?;
        }
        VExpr::Sub(a, b) => {
            linear_positions(a, scale, space, pos, coeffs, shift)?;
            linear_positions(b, &-scale, space, pos, coeffs, shift)?;
        }
        VExpr::Neg(a) => linear_positions(a, &-scale, space, pos, coeffs, shift)?,
        VExpr::Scale(r, a) => linear_positions(a, &(scale * r), space, pos, coeffs, shift)?,
        _ => return Err(LowerError::NormfnArgument { pos }),
    }
    Ok(())
}
