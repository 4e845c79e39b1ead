//! Morphisms between partial-word alphabets, fixed points, and the catalog of
//! named constructions.

use std::fmt;

use thiserror::Error;

use crate::word::{PartialWord, Symbol, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("symbol {0} has no image under this morphism")]
    OutsideDomain(String),
    #[error("morphism is not prolongable on {seed}: its image must start with {seed} and have length at least 2")]
    NotProlongable { seed: u8 },
    #[error("fixed points are only generated for hole-free images")]
    HoleInImage,
    #[error("malformed morphism text: {0}")]
    Syntax(String),
    #[error("unknown word {0:?}")]
    UnknownWord(String),
    #[error("requested length {requested} exceeds the cap of {cap}")]
    TooLong { requested: usize, cap: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A letter-to-word map. Images live over `target_alphabet` letters and may
/// contain holes; the domain is `0..images.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<PartialWord>,
    target_alphabet: u8,
    uniform_width: Option<usize>,
}

impl Morphism {
    pub fn new(target_alphabet: u8, images: Vec<PartialWord>) -> Result<Self, MorphismError> {
        let images = images
            .into_iter()
            .map(|w| w.widen(target_alphabet))
            .collect::<Result<Vec<_>, _>>()?;
        let uniform_width = match images.first() {
            Some(first) if images.iter().all(|w| w.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Ok(Morphism {
            images,
            target_alphabet,
            uniform_width,
        })
    }

    /// Builds a morphism from human-format images such as `["01◇", "02◇"]`.
    pub fn from_images(target_alphabet: u8, images: &[&str]) -> Result<Self, MorphismError> {
        let images = images
            .iter()
            .map(|s| PartialWord::parse_with_alphabet(s, target_alphabet))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(target_alphabet, images)
    }

    pub fn identity(alphabet: u8) -> Self {
        let images = (0..alphabet)
            .map(|a| PartialWord::full(alphabet, &[a]).unwrap())
            .collect();
        Morphism {
            images,
            target_alphabet: alphabet,
            uniform_width: Some(1),
        }
    }

    /// Parses `0->1100, 1->0112, 2->1010`. Every digit is read as a letter; the
    /// target alphabet is the smallest one covering all image digits.
    pub fn parse(text: &str) -> Result<Self, MorphismError> {
        let rules = parse_rules(text)?;
        let target = rules
            .iter()
            .flat_map(|(_, img)| img.iter().copied())
            .max()
            .map_or(1, |m| m + 1);
        Self::from_rules(rules, target, None)
    }

    /// Parses the same text but reads the digit `hole_code` as a hole, so the
    /// target alphabet is `0..hole_code`.
    pub fn parse_with_hole(text: &str, hole_code: u8) -> Result<Self, MorphismError> {
        Self::from_rules(parse_rules(text)?, hole_code, Some(hole_code))
    }

    fn from_rules(rules: Vec<(u8, Vec<u8>)>, target: u8, hole: Option<u8>) -> Result<Self, MorphismError> {
        let domain = rules.len();
        let mut images: Vec<Option<PartialWord>> = vec![None; domain];
        for (letter, img) in rules {
            let slot = images
                .get_mut(letter as usize)
                .ok_or_else(|| MorphismError::Syntax(format!("letter {letter} leaves a gap in the domain")))?;
            if slot.is_some() {
                return Err(MorphismError::Syntax(format!("letter {letter} defined twice")));
            }
            let symbols = img
                .into_iter()
                .map(|d| {
                    if Some(d) == hole {
                        Symbol::Hole
                    } else {
                        Symbol::Letter(d)
                    }
                })
                .collect();
            *slot = Some(PartialWord::new(target, symbols)?);
        }
        let images = images.into_iter().map(Option::unwrap).collect();
        Self::new(target, images)
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn target_alphabet(&self) -> u8 {
        self.target_alphabet
    }

    pub fn uniform_width(&self) -> Option<usize> {
        self.uniform_width
    }

    pub fn image(&self, letter: u8) -> Option<&PartialWord> {
        self.images.get(letter as usize)
    }

    pub fn images(&self) -> &[PartialWord] {
        &self.images
    }

    pub fn has_holes(&self) -> bool {
        self.images.iter().any(|w| !w.is_full())
    }

    pub fn apply(&self, w: &PartialWord) -> Result<PartialWord, MorphismError> {
        let mut out = Vec::with_capacity(w.len() * self.uniform_width.unwrap_or(2));
        for s in w.symbols() {
            let img = match *s {
                Symbol::Letter(a) => self.image(a),
                Symbol::Hole => None,
            }
            .ok_or_else(|| MorphismError::OutsideDomain(w.code(*s).to_string()))?;
            out.extend_from_slice(img.symbols());
        }
        Ok(PartialWord::new(self.target_alphabet, out)?)
    }

    /// First `length` letters of the fixed point `m^ω(seed)`.
    pub fn fixed_point_prefix(&self, seed: u8, length: usize) -> Result<PartialWord, MorphismError> {
        let seed_img = self
            .image(seed)
            .ok_or_else(|| MorphismError::OutsideDomain(seed.to_string()))?;
        if seed_img.len() < 2 || seed_img.get(0) != Some(Symbol::Letter(seed)) {
            return Err(MorphismError::NotProlongable { seed });
        }
        if self.has_holes() {
            return Err(MorphismError::HoleInImage);
        }
        let letters: Vec<Vec<u8>> = self
            .images
            .iter()
            .map(|w| w.symbols().iter().map(|s| s.letter().unwrap()).collect())
            .collect();
        for img in &letters {
            if let Some(&bad) = img.iter().find(|&&a| a as usize >= letters.len()) {
                return Err(MorphismError::OutsideDomain(bad.to_string()));
            }
        }
        let mut out: Vec<u8> = Vec::with_capacity(length + 32);
        out.extend_from_slice(&letters[seed as usize]);
        let mut next = 1;
        while out.len() < length {
            let a = out[next];
            out.extend_from_slice(&letters[a as usize]);
            next += 1;
        }
        out.truncate(length);
        Ok(PartialWord::full(self.target_alphabet, &out)?)
    }

    /// Composition `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism, MorphismError> {
        let images = inner
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        Morphism::new(self.target_alphabet, images)
    }
}

fn parse_rules(text: &str) -> Result<Vec<(u8, Vec<u8>)>, MorphismError> {
    let digit = |c: char| {
        c.to_digit(10)
            .map(|d| d as u8)
            .ok_or_else(|| MorphismError::Syntax(format!("expected a digit, found {c:?}")))
    };
    // rules are separated by commas or whitespace; spaces around the arrow
    // are allowed
    let mut squeezed = text.replace(',', " ");
    while squeezed.contains(" ->") || squeezed.contains("-> ") {
        squeezed = squeezed.replace(" ->", "->").replace("-> ", "->");
    }
    let mut rules = Vec::new();
    for rule in squeezed.split_whitespace() {
        let (lhs, rhs) = rule
            .split_once("->")
            .ok_or_else(|| MorphismError::Syntax(format!("missing '->' in {rule:?}")))?;
        let mut lhs_chars = lhs.trim().chars();
        let letter = match (lhs_chars.next(), lhs_chars.next()) {
            (Some(c), None) => digit(c)?,
            _ => return Err(MorphismError::Syntax(format!("bad letter {lhs:?}"))),
        };
        let img = rhs.trim().chars().map(digit).collect::<Result<Vec<_>, _>>()?;
        if img.is_empty() {
            return Err(MorphismError::Syntax(format!("empty image for {letter}")));
        }
        rules.push((letter, img));
    }
    if rules.is_empty() {
        return Err(MorphismError::Syntax("no rules".into()));
    }
    Ok(rules)
}

/// Prints the rule list with holes written as the code `target_alphabet`.
impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, img) in self.images.iter().enumerate() {
            if a > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{}", img.to_walnut())?;
        }
        Ok(())
    }
}

/// Named morphisms and words.
pub mod catalog {
    use super::*;

    /// Words longer than this are refused by [`named_word_prefix`].
    pub const DEFAULT_LENGTH_CAP: usize = 1 << 27;

    fn m(target: u8, images: &[&str]) -> Morphism {
        Morphism::from_images(target, images).expect("catalog morphism")
    }

    /// Thue-Morse: 0 -> 01, 1 -> 10.
    pub fn tm() -> Morphism {
        m(2, &["01", "10"])
    }

    /// Ternary Thue-Morse: 0 -> 012, 1 -> 02, 2 -> 1.
    pub fn vtm() -> Morphism {
        m(3, &["012", "02", "1"])
    }

    pub fn h() -> Morphism {
        m(2, &["1100", "011◇", "1010"])
    }

    /// `h` with its hole filled by 1.
    pub fn g_full() -> Morphism {
        m(2, &["1100", "0111", "1010"])
    }

    pub fn f() -> Morphism {
        m(8, &["01", "23", "24", "51", "06", "01", "74", "24"])
    }

    /// `m mod 2`, except that 6 becomes a hole.
    pub fn g_coding() -> Morphism {
        m(2, &["0", "1", "0", "1", "0", "1", "◇", "1"])
    }

    pub fn psi() -> Morphism {
        m(
            5,
            &[
                "012321012340121012321234",
                "012101234323401234321234",
                "012101232123401232101234",
                "012321234323401232101234",
                "012321234012101234321234",
            ],
        )
    }

    pub fn phi() -> Morphism {
        m(2, &["◇11100", "101100", "111000", "110010", "110001"])
    }

    pub fn rho() -> Morphism {
        m(4, &["03", "12", "01", "10"])
    }

    pub fn sigma() -> Morphism {
        m(4, &["320◇", "120◇", "310◇", "130◇"])
    }

    pub fn tau() -> Morphism {
        m(3, &["01◇", "02◇"])
    }

    pub fn gamma() -> Morphism {
        m(4, &["03", "02", "21", "20"])
    }

    pub fn delta() -> Morphism {
        m(5, &["01302", "01234", "43142", "43210"])
    }

    /// Replaces letter `i` of `{0,..,4}` by a hole.
    pub fn phi_i(i: u8) -> Morphism {
        assert!(i < 5);
        let images = (0..5u8)
            .map(|a| {
                let s = if a == i { Symbol::Hole } else { Symbol::Letter(a) };
                PartialWord::new(5, vec![s]).unwrap()
            })
            .collect();
        Morphism::new(5, images).unwrap()
    }

    /// A catalog word: codings applied (innermost first) to a fixed point.
    #[derive(Debug, Clone)]
    pub struct NamedWord {
        pub id: &'static str,
        pub generator: Morphism,
        pub seed: u8,
        pub images: Vec<Morphism>,
    }

    pub const IDS: &[&str] = &[
        "tm",
        "vtm",
        "h_vtm",
        "g_vtm",
        "f_fix",
        "g_f_fix",
        "psi_fix",
        "phi_psi_fix",
        "rho_fix",
        "sigma_rho_fix",
        "tau_tm",
        "gamma_fix",
        "delta_gamma_fix",
        "phi0_delta_gamma_fix",
        "phi1_delta_gamma_fix",
        "phi2_delta_gamma_fix",
        "phi3_delta_gamma_fix",
        "phi4_delta_gamma_fix",
    ];

    pub fn lookup(id: &str) -> Result<NamedWord, MorphismError> {
        let (generator, images) = match id {
            "tm" => (tm(), vec![]),
            "vtm" => (vtm(), vec![]),
            "h_vtm" => (vtm(), vec![h()]),
            "g_vtm" => (vtm(), vec![g_full()]),
            "f_fix" => (f(), vec![]),
            "g_f_fix" => (f(), vec![g_coding()]),
            "psi_fix" => (psi(), vec![]),
            "phi_psi_fix" => (psi(), vec![phi()]),
            "rho_fix" => (rho(), vec![]),
            "sigma_rho_fix" => (rho(), vec![sigma()]),
            "tau_tm" => (tm(), vec![tau()]),
            "gamma_fix" => (gamma(), vec![]),
            "delta_gamma_fix" => (gamma(), vec![delta()]),
            "phi0_delta_gamma_fix" => (gamma(), vec![delta(), phi_i(0)]),
            "phi1_delta_gamma_fix" => (gamma(), vec![delta(), phi_i(1)]),
            "phi2_delta_gamma_fix" => (gamma(), vec![delta(), phi_i(2)]),
            "phi3_delta_gamma_fix" => (gamma(), vec![delta(), phi_i(3)]),
            "phi4_delta_gamma_fix" => (gamma(), vec![delta(), phi_i(4)]),
            _ => return Err(MorphismError::UnknownWord(id.to_string())),
        };
        let id = IDS.iter().find(|&&k| k == id).copied().unwrap();
        Ok(NamedWord {
            id,
            generator,
            seed: 0,
            images,
        })
    }

    pub fn named_word_prefix(id: &str, length: usize) -> Result<PartialWord, MorphismError> {
        named_word_prefix_capped(id, length, DEFAULT_LENGTH_CAP)
    }

    pub fn named_word_prefix_capped(id: &str, length: usize, cap: usize) -> Result<PartialWord, MorphismError> {
        if length > cap {
            return Err(MorphismError::TooLong { requested: length, cap });
        }
        let named = lookup(id)?;
        // Each image stage multiplies length by at least its shortest image.
        let shrink: usize = named
            .images
            .iter()
            .map(|m| m.images().iter().map(|w| w.len()).min().unwrap_or(1).max(1))
            .product();
        let base_len = length.div_ceil(shrink);
        let mut w = named.generator.fixed_point_prefix(named.seed, base_len)?;
        for img in &named.images {
            w = img.apply(&w)?;
        }
        Ok(w.prefix(length))
    }
}
