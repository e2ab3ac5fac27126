//! Structured verification reports.
//!
//! Checks never fail with an error when the checked identity is violated;
//! violations are data. A report is empty exactly when the property holds,
//! and every witness carries enough information to replay the failure.

use std::fmt;

use crate::algebra::IndexTuple;
use crate::linalg::Rational;

/// The property a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    Jacobi,
    Metric,
    Skew,
    NotIdeal,
    NotHomomorphism,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ViolationKind::Jacobi => "jacobi",
            ViolationKind::Metric => "metric",
            ViolationKind::Skew => "skew",
            ViolationKind::NotIdeal => "not_ideal",
            ViolationKind::NotHomomorphism => "not_homomorphism",
        };
        f.write_str(name)
    }
}

/// A single verified counterexample.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// `[x, [y]] - sum_i [y_1, .., [x, y_i], .., y_n]` is nonzero.
    Jacobi {
        x: IndexTuple,
        y: IndexTuple,
        mismatch: Vec<Rational>,
    },
    /// `<[x, e_y], e_z> + <e_y, [x, e_z]>` is nonzero.
    Metric {
        x: IndexTuple,
        y: usize,
        z: usize,
        mismatch: Rational,
    },
    /// An entry of a bilinear-form compatibility identity is nonzero
    /// (skewness of an endomorphism, or failure of an isometry).
    Skew {
        row: usize,
        col: usize,
        mismatch: Rational,
    },
    /// The bracket of a basis generator of the subspace with a basis tuple
    /// leaves the subspace; `residue` is the part outside it.
    NotIdeal {
        generator: usize,
        tuple: IndexTuple,
        residue: Vec<Rational>,
    },
    /// An n-fold bracket of subspace generators (row indices `rows` into its
    /// basis) leaves the subspace.
    NotClosed {
        rows: IndexTuple,
        residue: Vec<Rational>,
    },
    /// `phi([e_t..]) - [phi(e_t)..]` is nonzero on a basis tuple.
    NotHomomorphism {
        tuple: IndexTuple,
        mismatch: Vec<Rational>,
    },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::Jacobi { .. } => ViolationKind::Jacobi,
            Violation::Metric { .. } => ViolationKind::Metric,
            Violation::Skew { .. } => ViolationKind::Skew,
            Violation::NotIdeal { .. } | Violation::NotClosed { .. } => ViolationKind::NotIdeal,
            Violation::NotHomomorphism { .. } => ViolationKind::NotHomomorphism,
        }
    }
}

fn fmt_vector(f: &mut fmt::Formatter<'_>, v: &[Rational]) -> fmt::Result {
    write!(f, "(")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Jacobi { x, y, mismatch } => {
                write!(f, "x={x} y={y}: mismatch ")?;
                fmt_vector(f, mismatch)
            }
            Violation::Metric { x, y, z, mismatch } => {
                write!(f, "x={x} y={} z={}: mismatch {mismatch}", y + 1, z + 1)
            }
            Violation::Skew { row, col, mismatch } => {
                write!(f, "entry ({}, {}): mismatch {mismatch}", row + 1, col + 1)
            }
            Violation::NotIdeal {
                generator,
                tuple,
                residue,
            } => {
                write!(f, "generator {} against {tuple}: residue ", generator + 1)?;
                fmt_vector(f, residue)
            }
            Violation::NotClosed { rows, residue } => {
                write!(f, "generators {rows}: residue ")?;
                fmt_vector(f, residue)
            }
            Violation::NotHomomorphism { tuple, mismatch } => {
                write!(f, "tuple {tuple}: mismatch ")?;
                fmt_vector(f, mismatch)
            }
        }
    }
}

/// A deterministic, canonically ordered list of violations. Empty means the
/// checked property holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationReport {
    violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn new(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        ViolationReport { violations }
    }

    pub fn empty() -> Self {
        ViolationReport::default()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }

    pub fn merged(mut self, other: ViolationReport) -> ViolationReport {
        self.violations.extend(other.violations);
        ViolationReport::new(self.violations)
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ok");
        }
        writeln!(f, "{} violations", self.len())?;
        for v in &self.violations {
            writeln!(f, "  {} {v}", v.kind())?;
        }
        Ok(())
    }
}
