//! Named figure grids and their published modal values.
//!
//! Rectangular grids are laid out with the sign of `A` across the columns
//! (positive, negative, arbitrary) and the sign of `B` down the rows, cells
//! lettered `a`–`i` row by row. The polar grid puts the symmetry of `G`
//! across the columns and that of `P` down the rows.

use super::spec::{ExperimentSpec, StructureFamily};
use crate::structure::{SignKind, SymmetryKind, ThresholdMode};

/// Published most-probable period and its probability.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Reference {
    pub period: u64,
    pub probability: f64,
}

#[derive(Clone, PartialEq, Debug)]
pub struct FigureCell {
    /// e.g. `fig3a`.
    pub label: String,
    pub family: StructureFamily,
    pub threshold: ThresholdMode,
    pub reference: Option<Reference>,
}

impl FigureCell {
    pub fn spec(&self, trials: u64, master_seed: u64, cap: u64) -> ExperimentSpec {
        let mut s = ExperimentSpec::new(self.label.clone(), self.family, self.threshold);
        s.trials = trials;
        s.master_seed = master_seed;
        s.cap = cap;
        s
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Figure {
    pub name: &'static str,
    pub title: &'static str,
    pub cells: Vec<FigureCell>,
}

impl Figure {
    pub fn cell(&self, letter: char) -> Option<&FigureCell> {
        self.cells.iter().find(|c| c.label.ends_with(letter))
    }
}

pub const FIGURES: [&str; 10] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

const SIGNS: [SignKind; 3] = [SignKind::Positive, SignKind::Negative, SignKind::Arbitrary];
const SYMS: [SymmetryKind; 3] = [SymmetryKind::Symmetric, SymmetryKind::Antisymmetric, SymmetryKind::Arbitrary];
const LETTERS: [char; 9] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i'];

fn reference(period: u64, probability: f64) -> Option<Reference> {
    Some(Reference { period, probability })
}

fn rect(name: &'static str, sym_a: SymmetryKind, sym_b: SymmetryKind, refs: [(u64, f64); 9]) -> Vec<FigureCell> {
    (0..9)
        .map(|k| FigureCell {
            label: format!("{name}{}", LETTERS[k]),
            family: StructureFamily::RectGrid { sym_a, sign_a: SIGNS[k % 3], sym_b, sign_b: SIGNS[k / 3] },
            threshold: ThresholdMode::Zero,
            reference: reference(refs[k].0, refs[k].1),
        })
        .collect()
}

fn polar(name: &'static str, refs: [(u64, f64); 9]) -> Vec<FigureCell> {
    (0..9)
        .map(|k| FigureCell {
            label: format!("{name}{}", LETTERS[k]),
            family: StructureFamily::PolarGrid { sym_g: SYMS[k % 3], sym_p: SYMS[k / 3] },
            threshold: ThresholdMode::Zero,
            reference: reference(refs[k].0, refs[k].1),
        })
        .collect()
}

fn pair(name: &'static str, letters: [char; 2], family: StructureFamily) -> [FigureCell; 2] {
    [
        FigureCell { label: format!("{name}{}", letters[0]), family, threshold: ThresholdMode::Zero, reference: None },
        FigureCell {
            label: format!("{name}{}", letters[1]),
            family,
            threshold: ThresholdMode::UniformScaled,
            reference: None,
        },
    ]
}

pub fn figure(name: &str) -> Option<Figure> {
    use SymmetryKind::{Antisymmetric as Anti, Arbitrary as Arb, Symmetric as Sym};
    let (name, title, cells): (&'static str, &'static str, Vec<FigureCell>) = match name {
        "fig1" => ("fig1", "skew-Hermitian weights", pair("fig1", ['a', 'b'], StructureFamily::SkewHermitian).to_vec()),
        "fig2" => {
            let mut cells = pair("fig2", ['a', 'b'], StructureFamily::BraidedHermitian).to_vec();
            cells.extend(pair("fig2", ['c', 'd'], StructureFamily::BraidedSkewHermitian));
            ("fig2", "braided Hermitian and braided skew-Hermitian weights", cells)
        }
        #[rustfmt::skip]
        "fig3" => ("fig3", "A symmetric, B symmetric", rect("fig3", Sym, Sym, [
            (8, 0.95), (8, 0.94), (4, 0.98),
            (8, 0.95), (8, 0.95), (4, 0.98),
            (1, 0.98), (2, 0.98), (8, 0.02),
        ])),
        #[rustfmt::skip]
        "fig4" => ("fig4", "A symmetric, B arbitrary", rect("fig4", Sym, Arb, [
            (8, 0.96), (8, 0.96), (4, 0.98),
            (8, 0.96), (8, 0.96), (4, 0.98),
            (1, 0.99), (2, 1.00), (2, 0.80),
        ])),
        #[rustfmt::skip]
        "fig5" => ("fig5", "A antisymmetric, B antisymmetric", rect("fig5", Anti, Anti, [
            (8, 0.97), (8, 0.98), (2, 0.26),
            (8, 0.98), (8, 0.98), (2, 0.26),
            (4, 0.56), (4, 0.55), (8, 0.02),
        ])),
        #[rustfmt::skip]
        "fig6" => ("fig6", "A antisymmetric, B arbitrary", rect("fig6", Anti, Arb, [
            (4, 1.00), (4, 1.00), (4, 1.00),
            (4, 1.00), (4, 1.00), (4, 1.00),
            (4, 0.92), (4, 0.92), (4, 0.81),
        ])),
        #[rustfmt::skip]
        "fig7" => ("fig7", "A arbitrary, B symmetric", rect("fig7", Arb, Sym, [
            (8, 0.96), (8, 0.96), (4, 1.00),
            (8, 0.96), (8, 0.96), (4, 1.00),
            (1, 0.98), (2, 0.98), (4, 0.73),
        ])),
        #[rustfmt::skip]
        "fig8" => ("fig8", "A arbitrary, B antisymmetric", rect("fig8", Arb, Anti, [
            (1, 0.99), (2, 1.00), (2, 0.76),
            (1, 0.99), (2, 1.00), (2, 0.76),
            (1, 0.99), (2, 1.00), (2, 0.86),
        ])),
        #[rustfmt::skip]
        "fig9" => ("fig9", "A arbitrary, B arbitrary", rect("fig9", Arb, Arb, [
            (8, 0.98), (8, 0.98), (4, 0.99),
            (8, 0.98), (8, 0.98), (4, 0.99),
            (1, 0.99), (2, 0.99), (4, 0.02),
        ])),
        #[rustfmt::skip]
        "fig10" | "polar" => ("fig10", "polar form G·exp(iP)", polar("fig10", [
            (4, 0.02), (4, 0.02), (4, 0.02),
            (2, 0.77), (4, 1.00), (2, 0.51),
            (4, 0.02), (8, 0.02), (4, 0.02),
        ])),
        _ => return None,
    };
    Some(Figure { name, title, cells })
}

/// Looks up a single cell such as `fig3a`.
pub fn cell(label: &str) -> Option<FigureCell> {
    let fig = label.get(..label.len().checked_sub(1)?)?;
    figure(fig)?.cells.into_iter().find(|c| c.label == label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_resolves() {
        for name in FIGURES {
            let f = figure(name).unwrap();
            assert!(!f.cells.is_empty());
            for c in &f.cells {
                assert!(c.label.starts_with(name));
            }
        }
        assert_eq!(figure("polar").unwrap().name, "fig10");
        assert!(figure("fig11").is_none());
    }

    #[test]
    fn cell_layout() {
        let c = cell("fig3c").unwrap();
        assert_eq!(
            c.family,
            StructureFamily::RectGrid {
                sym_a: SymmetryKind::Symmetric,
                sign_a: SignKind::Arbitrary,
                sym_b: SymmetryKind::Symmetric,
                sign_b: SignKind::Positive,
            }
        );
        assert_eq!(c.reference, Some(Reference { period: 4, probability: 0.98 }));
        let c = cell("fig8b").unwrap();
        assert_eq!(
            c.family,
            StructureFamily::RectGrid {
                sym_a: SymmetryKind::Arbitrary,
                sign_a: SignKind::Negative,
                sym_b: SymmetryKind::Antisymmetric,
                sign_b: SignKind::Positive,
            }
        );
        let e = cell("fig10e").unwrap();
        assert_eq!(
            e.family,
            StructureFamily::PolarGrid { sym_g: SymmetryKind::Antisymmetric, sym_p: SymmetryKind::Antisymmetric }
        );
        assert_eq!(cell("fig1b").unwrap().threshold, ThresholdMode::UniformScaled);
        assert!(cell("fig3z").is_none());
        assert!(cell("").is_none());
    }
}
