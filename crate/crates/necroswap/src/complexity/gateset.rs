use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::Gate;

/// Angle used for the default phase-gate placements: small, and
/// incommensurate with the phases of the states searched here.
pub const DEFAULT_PHASE_ANGLE: f64 = std::f64::consts::PI / 64.0;

/// A gate template expanded over every valid placement on a register.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GateTemplate {
    H,
    X,
    Z,
    S,
    R { phi: f64 },
    Cnot,
}

/// All allowed gate placements on a register of fixed width. The placement
/// order is part of the contract: searches report the first witness in
/// this order, so identical inputs give identical witnesses.
#[derive(Debug, Clone)]
pub struct GateSet {
    name: String,
    width: usize,
    placements: Vec<Gate>,
}

impl GateSet {
    /// Hadamard, NOT, CNOT and the small phase gate R_{pi/64}, placed on
    /// every qubit (and every ordered pair for CNOT; a single wire just
    /// loses the CNOT placements).
    pub fn universal_default(width: usize) -> Result<Self> {
        let mut templates = vec![GateTemplate::H, GateTemplate::X];
        if width >= 2 {
            templates.push(GateTemplate::Cnot);
        }
        templates.push(GateTemplate::R {
            phi: DEFAULT_PHASE_ANGLE,
        });
        Self::from_templates("universal-default", &templates, width)
    }

    /// Hadamard, NOT and CNOT only.
    pub fn hxc(width: usize) -> Result<Self> {
        Self::from_templates(
            "hxc",
            &[GateTemplate::H, GateTemplate::X, GateTemplate::Cnot],
            width,
        )
    }

    /// Expand templates over all placements on `width` qubits.
    pub fn from_templates(name: &str, templates: &[GateTemplate], width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidParameter("gate set needs width >= 1".into()));
        }
        let mut placements = Vec::new();
        for template in templates {
            match *template {
                GateTemplate::H => {
                    placements.extend((0..width).map(|target| Gate::H { target }))
                }
                GateTemplate::X => {
                    placements.extend((0..width).map(|target| Gate::X { target }))
                }
                GateTemplate::Z => {
                    placements.extend((0..width).map(|target| Gate::Z { target }))
                }
                GateTemplate::S => {
                    placements.extend((0..width).map(|target| Gate::S { target }))
                }
                GateTemplate::R { phi } => {
                    placements.extend((0..width).map(|target| Gate::R { target, phi }))
                }
                GateTemplate::Cnot => {
                    if width < 2 {
                        return Err(Error::InvalidParameter(
                            "CNOT placements need width >= 2".into(),
                        ));
                    }
                    for control in 0..width {
                        for target in 0..width {
                            if control != target {
                                placements.push(Gate::Cnot { control, target });
                            }
                        }
                    }
                }
            }
        }
        Self::from_placements(name, width, placements)
    }

    /// Build from explicit placements, validating each against the width.
    pub fn from_placements(name: &str, width: usize, placements: Vec<Gate>) -> Result<Self> {
        if placements.is_empty() {
            return Err(Error::InvalidParameter("gate set must not be empty".into()));
        }
        for gate in &placements {
            gate.check_targets(width)?;
        }
        Ok(GateSet {
            name: name.to_string(),
            width,
            placements,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of placements `g`.
    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn placements(&self) -> &[Gate] {
        &self.placements
    }

    /// The adjoint of every placement, in the same order. Used by the
    /// backward half of meet-in-the-middle searches.
    pub fn adjoint_placements(&self) -> Vec<Gate> {
        self.placements.iter().map(|g| g.adjoint()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_set_has_expected_placements() {
        let gs = GateSet::universal_default(3).unwrap();
        // 3 H + 3 X + 6 CNOT + 3 R
        assert_eq!(gs.len(), 15);
        assert_eq!(gs.width(), 3);
        assert!(matches!(gs.placements()[0], Gate::H { target: 0 }));
        assert!(matches!(gs.placements()[14], Gate::R { target: 2, .. }));
    }

    #[test]
    fn cnot_needs_two_qubits() {
        // The default set degrades gracefully on one wire; explicit CNOT
        // templates do not.
        assert_eq!(GateSet::universal_default(1).unwrap().len(), 3);
        assert!(GateSet::from_templates("bad", &[GateTemplate::Cnot], 1).is_err());
        assert!(GateSet::from_templates("just-h", &[GateTemplate::H], 1).is_ok());
    }

    #[test]
    fn placements_are_validated() {
        let bad = vec![Gate::H { target: 5 }];
        assert!(GateSet::from_placements("bad", 2, bad).is_err());
        assert!(GateSet::from_placements("empty", 2, vec![]).is_err());
    }
}
