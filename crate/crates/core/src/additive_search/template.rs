use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colouring::{canonicalize, DiscreteColouring};

/// Allowed colours at positions `1..=40` of the shifted Schur extremals with
/// four colours: `RBBRGGxGGRBBR PPyPPzwstPPuPP RBBRGGvGGRBBR`.
pub const TEMPLATE_5: [&str; 40] = [
    "R", "B", "B", "R", "G", "G", "RG", "G", "G", "R", "B", "B", "R", //
    "P", "P", "RP", "P", "P", "RP", "BGP", "BGP", "RP", "P", "P", "RP", "P", "P", //
    "R", "B", "B", "R", "G", "G", "RG", "G", "G", "R", "B", "B", "R",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error("colouring {index} covers [{lo}, {hi}], expected [1, 40]")]
    Length { index: usize, lo: u64, hi: u64 },
    #[error("colouring {index} has {r} colours, expected 4")]
    Colours { index: usize, r: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateReport {
    pub checked: usize,
    pub all_match: bool,
    /// Indices of colourings that do not fit the template.
    pub mismatches: Vec<usize>,
    pub template_cardinality: u64,
}

fn index_of(letter: char) -> u8 {
    match letter {
        'R' => 1,
        'B' => 2,
        'G' => 3,
        'P' => 4,
        _ => unreachable!("template letters are RBGP"),
    }
}

fn matches(c: &DiscreteColouring) -> bool {
    // Every template instance is already canonical (first R, B, G, P at
    // positions 1, 2, 5, 14), so comparing canonical forms is enough.
    let canon = canonicalize(c);
    canon.colours().iter().zip(TEMPLATE_5).all(|(&col, allowed)| allowed.chars().any(|l| index_of(l) == col))
}

pub fn check_template_5(colourings: &[DiscreteColouring]) -> Result<TemplateReport, TemplateError> {
    for (index, c) in colourings.iter().enumerate() {
        if c.lo() != 1 || c.hi() != 40 {
            return Err(TemplateError::Length { index, lo: c.lo(), hi: c.hi() });
        }
        if c.r() != 4 {
            return Err(TemplateError::Colours { index, r: c.r() });
        }
    }
    let mismatches: Vec<usize> = colourings.iter().enumerate().filter(|(_, c)| !matches(c)).map(|(i, _)| i).collect();
    Ok(TemplateReport {
        checked: colourings.len(),
        all_match: mismatches.is_empty(),
        mismatches,
        template_cardinality: TEMPLATE_5.iter().map(|s| s.len() as u64).product(),
    })
}

/// All colourings described by the template, sorted.
pub fn template_5_words() -> Vec<DiscreteColouring> {
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    for allowed in TEMPLATE_5 {
        words = words
            .into_iter()
            .flat_map(|w| {
                allowed.chars().map(move |l| {
                    let mut w = w.clone();
                    w.push(index_of(l));
                    w
                })
            })
            .collect();
    }
    words.sort();
    words.into_iter().map(|w| DiscreteColouring::new(1, 4, w).expect("template colours")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality() {
        let words = template_5_words();
        assert_eq!(words.len(), 576);
        let report = check_template_5(&words).unwrap();
        assert!(report.all_match);
        assert_eq!(report.template_cardinality, 576);
    }

    #[test]
    fn mismatch_at_position_7() {
        let mut colours = template_5_words()[0].colours().to_vec();
        colours[6] = 2;
        let bad = DiscreteColouring::new(1, 4, colours).unwrap();
        let report = check_template_5(&[bad]).unwrap();
        assert_eq!(report.mismatches, vec![0]);
    }

    #[test]
    fn permuted_instance_matches() {
        let c = template_5_words()[100].permuted(&[3, 1, 4, 2]).unwrap();
        assert!(check_template_5(&[c]).unwrap().all_match);
    }

    #[test]
    fn shape_errors() {
        let short = DiscreteColouring::from_word(1, 4, "RBBR").unwrap();
        assert!(matches!(check_template_5(&[short]), Err(TemplateError::Length { .. })));
    }
}
