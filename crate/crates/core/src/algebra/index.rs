use std::fmt;

/// Position or momentum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Position,
    Momentum,
}

/// One Cartesian component of a canonical operator, `z[particle].axis` or
/// `p[particle].axis`. Both `particle` and `axis` are 1-based.
///
/// The derived ordering (kind, particle, axis) is the normal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalIndex {
    pub kind: Kind,
    pub particle: usize,
    pub axis: usize,
}

impl CanonicalIndex {
    pub fn z(particle: usize, axis: usize) -> Self {
        CanonicalIndex { kind: Kind::Position, particle, axis }
    }

    pub fn p(particle: usize, axis: usize) -> Self {
        CanonicalIndex { kind: Kind::Momentum, particle, axis }
    }

    pub fn is_position(&self) -> bool {
        self.kind == Kind::Position
    }

    pub fn is_momentum(&self) -> bool {
        self.kind == Kind::Momentum
    }

    pub fn dof(&self) -> (usize, usize) {
        (self.particle, self.axis)
    }
}

impl fmt::Display for CanonicalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stem = if self.is_position() { 'z' } else { 'p' };
        write!(f, "{stem}[{}].{}", self.particle, axis_name(self.axis))
    }
}

/// Ambient index space of an operator: particle count and spatial dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub particles: usize,
    pub dim: usize,
}

impl Space {
    pub fn new(particles: usize, dim: usize) -> Self {
        Space { particles, dim }
    }

    pub fn contains(&self, idx: &CanonicalIndex) -> bool {
        (1..=self.particles).contains(&idx.particle) && (1..=self.dim).contains(&idx.axis)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolFamily {
    /// `a`, translation vector
    Translation,
    /// `v`, boost velocity
    Boost,
    /// `θ`, infinitesimal rotation angle (nilpotent at order two)
    Rotation,
}

/// Commuting formal parameter of a group action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalSymbol {
    pub family: SymbolFamily,
    pub axis: usize,
}

impl FormalSymbol {
    pub fn translation(axis: usize) -> Self {
        FormalSymbol { family: SymbolFamily::Translation, axis }
    }

    pub fn boost(axis: usize) -> Self {
        FormalSymbol { family: SymbolFamily::Boost, axis }
    }

    pub fn rotation(axis: usize) -> Self {
        FormalSymbol { family: SymbolFamily::Rotation, axis }
    }
}

impl fmt::Display for FormalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stem = match self.family {
            SymbolFamily::Translation => "a",
            SymbolFamily::Boost => "v",
            SymbolFamily::Rotation => "theta",
        };
        write!(f, "{}.{}", stem, axis_name(self.axis))
    }
}

pub fn axis_name(axis: usize) -> char {
    match axis {
        1 => 'x',
        2 => 'y',
        3 => 'z',
        _ => '?',
    }
}

pub fn axis_from_name(c: char) -> Option<usize> {
    match c {
        'x' => Some(1),
        'y' => Some(2),
        'z' => Some(3),
        _ => None,
    }
}
