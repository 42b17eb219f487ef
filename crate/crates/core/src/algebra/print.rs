use std::fmt;

use num::{One, Signed, Zero};

use crate::coeff::{format_rational, Coeff, Rational};

use super::atom::PotentialAtom;
use super::index::{axis_name, CanonicalIndex, Kind};
use super::monomial::Monomial;
use super::poly::OperatorPoly;

/// How canonical indices are spelled when printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Naming {
    /// `z[j].x`, `p[j].x`; re-parseable.
    Particles,
    /// `z'[i].x`, `p'[i].x`, with the center-of-mass row spelled `Z_cm`/`P_cm`.
    Frame { cm_row: Option<usize> },
}

impl Naming {
    fn vector(&self, kind: Kind, particle: usize) -> String {
        match (self, kind) {
            (Naming::Particles, Kind::Position) => format!("z[{particle}]"),
            (Naming::Particles, Kind::Momentum) => format!("p[{particle}]"),
            (Naming::Frame { cm_row }, Kind::Position) if *cm_row == Some(particle) => "Z_cm".into(),
            (Naming::Frame { cm_row }, Kind::Momentum) if *cm_row == Some(particle) => "P_cm".into(),
            (Naming::Frame { .. }, Kind::Position) => format!("z'[{particle}]"),
            (Naming::Frame { .. }, Kind::Momentum) => format!("p'[{particle}]"),
        }
    }

    fn index(&self, idx: &CanonicalIndex) -> String {
        format!("{}.{}", self.vector(idx.kind, idx.particle), axis_name(idx.axis))
    }
}

fn format_atom(atom: &PotentialAtom, naming: Naming) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (j, c) in &atom.coeffs {
        let v = naming.vector(Kind::Position, *j);
        parts.push(signed_term(c, v));
    }
    if !atom.shift.is_zero() {
        parts.push(signed_term(&atom.shift, "a".to_string()));
    }
    format!("normfn({}, {})", atom.name, join_signed(&parts))
}

fn signed_term(c: &Rational, body: String) -> (bool, String) {
    let neg = c.is_negative();
    let mag = c.abs();
    if mag.is_one() {
        (neg, body)
    } else {
        (neg, format!("{}*{}", format_rational(&mag), body))
    }
}

fn join_signed(parts: &[(bool, String)]) -> String {
    let mut s = String::new();
    for (k, (neg, body)) in parts.iter().enumerate() {
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(body);
    }
    s
}

fn format_monomial_body(m: &Monomial, naming: Naming) -> Vec<String> {
    let mut items = Vec::new();
    for (sym, e) in &m.symbols {
        items.push(with_power(sym.to_string(), *e));
    }
    for (idx, e) in m.positions() {
        items.push(with_power(naming.index(idx), *e));
    }
    for a in &m.atoms {
        items.push(format_atom(a, naming));
    }
    for (idx, e) in m.momenta() {
        items.push(with_power(naming.index(idx), *e));
    }
    items
}

fn with_power(base: String, e: u32) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// `(negative, magnitude)` so that the sign can be pulled into the join.
fn split_sign(c: &Coeff) -> (bool, Coeff) {
    let neg = if c.re.is_zero() { c.im.is_negative() } else { c.re.is_negative() && c.im.is_zero() };
    if neg {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

impl OperatorPoly {
    pub fn display_with(&self, naming: Naming) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::with_capacity(self.len());
        for (m, c) in self.terms() {
            let (neg, mag) = split_sign(c);
            let body = format_monomial_body(m, naming);
            let text = if body.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                body.join("*")
            } else {
                format!("{}*{}", mag, body.join("*"))
            };
            parts.push((neg, text));
        }
        join_signed(&parts)
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(Naming::Particles))
    }
}
