//! Geometry descriptors and boundary conditions shared across modules.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Clamped boundary: the field vanishes.
    Dirichlet,
    /// Traction-free boundary of the elastic problem.
    Free,
    /// Componentwise Neumann condition (scalar baselines only).
    Neumann,
}

impl BoundaryCondition {
    /// Sign of the boundary term in two-term expansions: -1 clamped, +1 otherwise.
    pub fn boundary_sign(self) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => -1.0,
            BoundaryCondition::Free | BoundaryCondition::Neumann => 1.0,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dir",
            BoundaryCondition::Free => "free",
            BoundaryCondition::Neumann => "neu",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dir" | "dirichlet" => Ok(Self::Dirichlet),
            "free" | "traction" => Ok(Self::Free),
            "neu" | "neumann" => Ok(Self::Neumann),
            other => Err(format!("unknown boundary condition '{other}' (dir, free, neu)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    UnitDisk,
    Rectangle { a: f64, b: f64 },
}

/// A planar domain with its area `vol_n` (S) and perimeter `vol_bdry` (L).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainDescriptor {
    pub kind: DomainKind,
    pub vol_n: f64,
    pub vol_bdry: f64,
}

impl DomainDescriptor {
    pub fn unit_disk() -> Self {
        Self {
            kind: DomainKind::UnitDisk,
            vol_n: PI,
            vol_bdry: 2.0 * PI,
        }
    }

    pub fn rectangle(a: f64, b: f64) -> crate::Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(crate::Error::Domain(format!(
                "rectangle sides must be positive, got {a} x {b}"
            )));
        }
        Ok(Self {
            kind: DomainKind::Rectangle { a, b },
            vol_n: a * b,
            vol_bdry: 2.0 * (a + b),
        })
    }

    /// Characteristic length `2S/L` (the radius for a disk).
    pub fn length_scale(&self) -> f64 {
        2.0 * self.vol_n / self.vol_bdry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures() {
        let d = DomainDescriptor::unit_disk();
        assert_eq!((d.vol_n, d.vol_bdry), (PI, 2.0 * PI));
        let r = DomainDescriptor::rectangle(2.0, 3.0).unwrap();
        assert_eq!((r.vol_n, r.vol_bdry), (6.0, 10.0));
        assert!(DomainDescriptor::rectangle(0.0, 1.0).is_err());
    }

    #[test]
    fn parse_bc() {
        assert_eq!(
            "Dirichlet".parse::<BoundaryCondition>().unwrap(),
            BoundaryCondition::Dirichlet
        );
        assert_eq!("free".parse::<BoundaryCondition>().unwrap(), BoundaryCondition::Free);
        assert!("robin".parse::<BoundaryCondition>().is_err());
    }
}
