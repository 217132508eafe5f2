//! Named reduced Lagrangians, emitted as ready-to-run scenario files.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::assembly::Variant;
use crate::coefficients::{Case, Coeff, CoefficientSet};
use crate::expr::Expr;
use crate::grid::GridSpec1D;

use super::config::{
    CoefficientSection, EvolveSection, InitialState, OutputSection, ScenarioConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresetInfo {
    pub name: &'static str,
    pub lagrangian: &'static str,
    pub equation: &'static str,
}

pub const PRESETS: [PresetInfo; 5] = [
    PresetInfo {
        name: "free",
        lagrangian: "a xdot^2",
        equation: "i hbar psi_t = -(hbar^2/4a) psi_xx",
    },
    PresetInfo {
        name: "a",
        lagrangian: "a xdot^2 + f x",
        equation: "i hbar psi_t = -(hbar^2/4a) psi_xx - f x psi",
    },
    PresetInfo {
        name: "b",
        lagrangian: "a xdot^2 + c x^2",
        equation: "i hbar psi_t = -(hbar^2/4a) psi_xx - c x^2 psi",
    },
    PresetInfo {
        name: "c",
        lagrangian: "a xdot^2 + b x xdot",
        equation: "i hbar psi_t = -(hbar^2/4a) psi_xx + i hbar (b x/2a) psi_x + (± b^2 x^2/4a + i hbar b/4a) psi",
    },
    PresetInfo {
        name: "d",
        lagrangian: "a xdot^2 + d xdot",
        equation: "i hbar psi_t = -(hbar^2/4a) psi_xx + i hbar (d/2a) psi_x ± (d^2/4a) psi",
    },
];

/// Coefficients used when emitting each preset.
pub fn preset_coefficients(name: &str) -> Option<CoefficientSet> {
    let half = Expr::Const(0.5);
    if name == "free" {
        return Some(CoefficientSet::free(1.0).expect("unit mass").with_label("free"));
    }
    let case = Case::from_letter(name)?;
    let partner = match case {
        Case::A => Expr::Const(1.0),
        Case::B => Expr::Neg(Box::new(Expr::Const(0.5))),
        Case::C | Case::D => Expr::Const(0.5),
    };
    let params = BTreeMap::from([(Coeff::A, half), (case.partner(), partner)]);
    Some(CoefficientSet::preset(case, &params).expect("preset parameters match the case"))
}

/// A complete scenario for the named preset.
pub fn preset_scenario(name: &str) -> Option<ScenarioConfig> {
    let set = preset_coefficients(name)?;
    let s = |e: &Expr| e.to_string();
    Some(ScenarioConfig {
        label: format!("preset-{name}"),
        variant: Variant::Rederived,
        dimension: 1,
        seed: 0,
        coefficients: CoefficientSection {
            a: s(&set.a),
            b: s(&set.b),
            c: s(&set.c),
            d: s(&set.d),
            f: s(&set.f),
            g: s(&set.g),
            hbar: set.hbar,
        },
        grid: GridSpec1D::new(-20.0, 20.0, 2048).expect("valid grid"),
        initial: InitialState::Packet {
            x0: 1.0,
            p0: 0.0,
            sigma: 1.0,
        },
        evolve: EvolveSection {
            dt: 1e-3,
            t_start: 0.0,
            t_final: 1.0,
            snapshot_every: 100,
            leak_threshold: crate::evolve::DEFAULT_LEAK_THRESHOLD,
            write_snapshots: false,
        },
        output: OutputSection {
            dir: None,
            emit_plotscript: false,
        },
    })
}
