//! Deterministic finite automata with output, read msd-first.

use std::collections::{BTreeSet, HashMap};

use super::dfa::{BoolOp, MultiTrackDfa};
use super::linear::{linear_automaton, Relation};
use super::minimize::{minimize, Table};
use super::AutomataError;
use crate::morphism::Morphism;
use crate::word::Symbol;

/// Reading the base-`k` digits of `n` from the initial state ends in a state
/// whose output is the `n`-th letter of the word. Outputs are integer codes;
/// a hole is just another code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    base: u32,
    trans: Vec<u32>,
    output: Vec<u32>,
    initial: u32,
}

impl Dfao {
    /// Raw constructor; checks totality and leading-zero invariance of the
    /// output but does not minimize.
    pub fn new(base: u32, trans: Vec<u32>, output: Vec<u32>, initial: u32) -> Result<Self, AutomataError> {
        let n = output.len();
        if base < 2 || n == 0 || trans.len() != n * base as usize {
            return Err(AutomataError::Malformed("DFAO table is not total".into()));
        }
        if trans.iter().any(|&t| t as usize >= n) || initial as usize >= n {
            return Err(AutomataError::Malformed("DFAO transition out of range".into()));
        }
        let dfao = Dfao {
            base,
            trans,
            output,
            initial,
        };
        // Leading zeros must not change any output.
        let padded = dfao.next(initial, 0);
        if dfao.minimized().equivalent_from(&dfao, padded) {
            Ok(dfao)
        } else {
            Err(AutomataError::Malformed(
                "DFAO output changes under leading zeros".into(),
            ))
        }
    }

    fn equivalent_from(&self, raw: &Dfao, start: u32) -> bool {
        let shifted = Dfao {
            initial: start,
            ..raw.clone()
        };
        *self == shifted.minimized()
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn states(&self) -> usize {
        self.output.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn output(&self, s: u32) -> u32 {
        self.output[s as usize]
    }

    #[inline]
    pub fn next(&self, s: u32, digit: u32) -> u32 {
        self.trans[s as usize * self.base as usize + digit as usize]
    }

    pub fn output_alphabet(&self) -> BTreeSet<u32> {
        self.output.iter().copied().collect()
    }

    /// The state reached on the msd-first digits of `n`.
    pub fn state_at(&self, n: u64) -> u32 {
        let b = self.base as u64;
        let mut digits = Vec::new();
        let mut n = n;
        while n > 0 {
            digits.push((n % b) as u32);
            n /= b;
        }
        digits.iter().rev().fold(self.initial, |s, &d| self.next(s, d))
    }

    pub fn eval(&self, n: u64) -> u32 {
        self.output(self.state_at(n))
    }

    pub fn prefix(&self, len: usize) -> Vec<u32> {
        (0..len as u64).map(|n| self.eval(n)).collect()
    }

    /// Moore-machine minimization with canonical numbering; the initial state
    /// becomes 0.
    pub fn minimized(&self) -> Dfao {
        let m = minimize(&Table {
            letters: self.base as usize,
            trans: &self.trans,
            labels: &self.output,
            initial: self.initial,
        });
        Dfao {
            base: self.base,
            trans: m.trans,
            output: m.labels,
            initial: 0,
        }
    }

    /// The automaton for `coding(m^ω(seed))` with one state per letter of the
    /// `base`-uniform morphism `m`.
    pub fn from_uniform_fixed_point(
        m: &Morphism,
        coding: &Morphism,
        seed: u8,
        base: u32,
    ) -> Result<Dfao, AutomataError> {
        let width = m.uniform_width().ok_or(AutomataError::NotUniform)?;
        if width != base as usize {
            return Err(AutomataError::WidthMismatch { width, base });
        }
        if coding.uniform_width() != Some(1) {
            return Err(AutomataError::NotUniform);
        }
        let letters = m.domain_size();
        if coding.domain_size() < letters {
            return Err(AutomataError::MissingImage(coding.domain_size() as u32));
        }
        let mut trans = Vec::with_capacity(letters * width);
        for a in 0..letters {
            for s in m.image(a as u8).unwrap().symbols() {
                match *s {
                    Symbol::Letter(b) if (b as usize) < letters => trans.push(b as u32),
                    Symbol::Letter(b) => return Err(AutomataError::MissingImage(b as u32)),
                    Symbol::Hole => {
                        return Err(AutomataError::Malformed(
                            "promoted morphism images must be hole-free".into(),
                        ))
                    }
                }
            }
        }
        if seed as usize >= letters || trans[seed as usize * width] != seed as u32 {
            return Err(AutomataError::Malformed(format!(
                "morphism is not prolongable on {seed}"
            )));
        }
        let output = (0..letters)
            .map(|a| {
                let img = coding.image(a as u8).unwrap();
                img.code(img.symbols()[0])
            })
            .collect();
        Ok(Dfao {
            base,
            trans,
            output,
            initial: seed as u32,
        })
    }

    /// Built-in words: `T` (Thue-Morse) and `VTM` (ternary Thue-Morse).
    pub fn builtin(name: &str) -> Result<Dfao, AutomataError> {
        match name {
            "T" => Ok(Dfao {
                base: 2,
                trans: vec![0, 1, 1, 0],
                output: vec![0, 1],
                initial: 0,
            }),
            // vtm[n] = 1 + tm[n] - tm[n+1]; a state records the parities of
            // the digits read so far and of their successor.
            "VTM" => Ok(Dfao {
                base: 2,
                trans: vec![0, 1, 2, 0, 2, 3, 0, 2],
                output: vec![0, 1, 2, 1],
                initial: 0,
            }),
            _ => Err(AutomataError::UnknownBuiltin(name.to_string())),
        }
    }

    /// One-track automaton on `var` accepting the positions whose letter is in
    /// `letters`.
    pub fn membership(&self, var: &str, letters: &BTreeSet<u32>) -> MultiTrackDfa {
        self.with_initial_first(|trans, output| {
            let accepting: Vec<bool> = output.iter().map(|o| letters.contains(o)).collect();
            MultiTrackDfa::minimized(self.base, vec![var.to_string()], trans, &accepting)
        })
    }

    /// Two-track automaton accepting `(a, b)` with `self[a] = other[b]`.
    pub fn equal_letters(&self, var_a: &str, other: &Dfao, var_b: &str) -> Result<MultiTrackDfa, AutomataError> {
        if self.base != other.base {
            return Err(AutomataError::BaseMismatch(self.base, other.base));
        }
        if var_a == var_b {
            return Err(AutomataError::Malformed("comparison needs two distinct tracks".into()));
        }
        let k = self.base as usize;
        // track order is by name
        let (first, second, swapped) = if var_a < var_b {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let vars = if swapped {
            vec![var_b.to_string(), var_a.to_string()]
        } else {
            vec![var_a.to_string(), var_b.to_string()]
        };
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(first.initial, second.initial)];
        ids.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut accepting = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            head += 1;
            accepting.push(first.output(p) == second.output(q));
            for l in 0..k * k {
                // track 0 (first) is the low digit
                let t = (first.next(p, (l % k) as u32), second.next(q, (l / k) as u32));
                let next = pairs.len() as u32;
                let id = *ids.entry(t).or_insert(next);
                if id == next {
                    pairs.push(t);
                }
                trans.push(id);
            }
        }
        Ok(MultiTrackDfa::minimized(self.base, vars, &trans, &accepting))
    }

    fn with_initial_first<R>(&self, f: impl FnOnce(&[u32], &[u32]) -> R) -> R {
        if self.initial == 0 {
            f(&self.trans, &self.output)
        } else {
            let m = self.minimized();
            f(&m.trans, &m.output)
        }
    }

    /// The word `m(self)` for a `t`-uniform morphism `m`, as a DFAO in the same
    /// base. For each output letter `c` the position set is
    /// `∃q ⋁_r (n = t·q + r ∧ self[q] ∈ {a : m(a)[r] = c})`.
    pub fn image(&self, m: &Morphism, limit: usize) -> Result<Dfao, AutomataError> {
        let t = m.uniform_width().ok_or(AutomataError::NotUniform)?;
        if t == 0 {
            return Err(AutomataError::NotUniform);
        }
        for &a in &self.output_alphabet() {
            if a as usize >= m.domain_size() {
                return Err(AutomataError::MissingImage(a));
            }
        }
        let domain = self.output_alphabet();
        let mut by_letter: HashMap<u32, Vec<BTreeSet<u32>>> = HashMap::new();
        for &a in &domain {
            let img = m.image(a as u8).unwrap();
            for (r, s) in img.symbols().iter().enumerate() {
                by_letter
                    .entry(img.code(*s))
                    .or_insert_with(|| vec![BTreeSet::new(); t])[r]
                    .insert(a);
            }
        }
        let mut codes: Vec<u32> = by_letter.keys().copied().collect();
        codes.sort_unstable();
        let (n, q) = ("n", "q");
        let mut positions = Vec::with_capacity(codes.len());
        for c in &codes {
            let mut acc = MultiTrackDfa::empty(self.base, vec![n.into(), q.into()]);
            for (r, sources) in by_letter[c].iter().enumerate() {
                if sources.is_empty() {
                    continue;
                }
                let split = linear_automaton(self.base, &[(n, 1), (q, -(t as i64))], Relation::Eq, r as i64)?;
                let here = split.product(&self.membership(q, sources), BoolOp::And, limit)?;
                acc = acc.product(&here, BoolOp::Or, limit)?;
            }
            positions.push(acc.project(&[q], limit)?);
        }
        Self::from_partition(self.base, &codes, &positions, limit)
    }

    /// Assembles a DFAO from one-track automata that partition the naturals.
    pub fn from_partition(
        base: u32,
        codes: &[u32],
        parts: &[MultiTrackDfa],
        limit: usize,
    ) -> Result<Dfao, AutomataError> {
        assert_eq!(codes.len(), parts.len());
        for p in parts {
            if p.tracks() != 1 || p.base() != base {
                return Err(AutomataError::Malformed(
                    "position sets must be one-track automata in the same base".into(),
                ));
            }
        }
        let k = base as usize;
        let start = vec![0u32; parts.len()];
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::from([(start.clone(), 0)]);
        let mut tuples = vec![start];
        let mut trans = Vec::new();
        let mut output = Vec::new();
        let mut head = 0;
        while head < tuples.len() {
            let cur = tuples[head].clone();
            head += 1;
            let mut hits = cur
                .iter()
                .zip(parts)
                .zip(codes)
                .filter(|((&s, p), _)| p.is_accepting(s))
                .map(|(_, &c)| c);
            let out = match (hits.next(), hits.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(AutomataError::Malformed(
                        "position sets do not partition the naturals".into(),
                    ))
                }
            };
            output.push(out);
            for d in 0..k {
                let next: Vec<u32> = cur.iter().zip(parts).map(|(&s, p)| p.next(s, d)).collect();
                let fresh = tuples.len() as u32;
                let id = *ids.entry(next.clone()).or_insert(fresh);
                if id == fresh {
                    tuples.push(next);
                }
                trans.push(id);
            }
            if tuples.len() > limit {
                return Err(AutomataError::ResourceExceeded {
                    states: tuples.len(),
                    limit,
                });
            }
        }
        Ok(Dfao {
            base,
            trans,
            output,
            initial: 0,
        }
        .minimized())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::catalog;

    const UNLIMITED: usize = usize::MAX;

    fn codes(w: &crate::word::PartialWord) -> Vec<u32> {
        w.codes()
    }

    #[test]
    fn builtins_reproduce_displayed_prefixes() {
        let t = Dfao::builtin("T").unwrap();
        let tm: Vec<u32> = "01101001100101101001011001101001"
            .chars()
            .map(|c| c.to_digit(10).unwrap())
            .collect();
        assert_eq!(t.prefix(32), tm);
        assert_eq!(t.eval(0), 0);
        let vtm = Dfao::builtin("VTM").unwrap();
        let expected: Vec<u32> = "012021012102012021020121"
            .chars()
            .map(|c| c.to_digit(10).unwrap())
            .collect();
        assert_eq!(vtm.prefix(24), expected);
        assert!(Dfao::builtin("X").is_err());
    }

    #[test]
    fn vtm_builtin_matches_morphism_for_65536_symbols() {
        let vtm = Dfao::builtin("VTM").unwrap();
        let w = catalog::vtm().fixed_point_prefix(0, 1 << 16).unwrap();
        assert_eq!(vtm.prefix(1 << 16), codes(&w));
        assert_eq!(vtm.minimized().states(), 4);
    }

    #[test]
    fn promoted_fixed_points() {
        let id2 = Morphism::identity(2);
        let t = Dfao::from_uniform_fixed_point(&catalog::tm(), &id2, 0, 2).unwrap();
        assert_eq!(t.states(), 2);
        assert_eq!(t.minimized(), Dfao::builtin("T").unwrap());
        let rho = Dfao::from_uniform_fixed_point(&catalog::rho(), &Morphism::identity(4), 0, 2).unwrap();
        assert_eq!(rho.states(), 4);
        let w = catalog::rho().fixed_point_prefix(0, 1 << 16).unwrap();
        assert_eq!(rho.prefix(1 << 16), codes(&w));
        let gf = Dfao::from_uniform_fixed_point(&catalog::f(), &catalog::g_coding(), 0, 2).unwrap();
        assert_eq!(gf.prefix(8), vec![0, 1, 0, 1, 0, 0, 1, 1]);
        assert_eq!(
            Dfao::from_uniform_fixed_point(&catalog::vtm(), &Morphism::identity(3), 0, 2),
            Err(AutomataError::NotUniform)
        );
        assert!(matches!(
            Dfao::from_uniform_fixed_point(&catalog::tau(), &Morphism::identity(3), 0, 2),
            Err(AutomataError::WidthMismatch { width: 3, base: 2 })
        ));
    }

    #[test]
    fn images_match_applied_morphisms() {
        let vtm = Dfao::builtin("VTM").unwrap();
        let h_vtm = vtm.image(&catalog::h(), UNLIMITED).unwrap();
        assert_eq!(h_vtm.prefix(12), vec![1, 1, 0, 0, 0, 1, 1, 2, 1, 0, 1, 0]);
        let t = Dfao::builtin("T").unwrap();
        let tau_t = t.image(&catalog::tau(), UNLIMITED).unwrap();
        assert_eq!(tau_t.prefix(9), vec![0, 1, 3, 0, 2, 3, 0, 2, 3]);
        let same = vtm.image(&Morphism::identity(3), UNLIMITED).unwrap();
        assert_eq!(same.prefix(1 << 16), vtm.prefix(1 << 16));
        assert_eq!(same, vtm.minimized());
        assert_eq!(t.image(&catalog::vtm(), UNLIMITED), Err(AutomataError::NotUniform));
        assert_eq!(
            vtm.image(&catalog::tm(), UNLIMITED),
            Err(AutomataError::MissingImage(2))
        );
    }

    #[test]
    fn comparison_automata() {
        let t = Dfao::builtin("T").unwrap();
        let eq = t.equal_letters("a", &t, "b").unwrap();
        let rev = t.equal_letters("b", &t, "a").unwrap();
        let ones = t.membership("x", &BTreeSet::from([1]));
        for a in 0..64u64 {
            assert_eq!(ones.accepts(&[a]), t.eval(a) == 1);
            for b in 0..64u64 {
                assert_eq!(eq.accepts_named(&[("a", a), ("b", b)]), t.eval(a) == t.eval(b));
                assert_eq!(rev.accepts_named(&[("a", a), ("b", b)]), t.eval(a) == t.eval(b));
            }
        }
    }

    #[test]
    fn rejects_padding_sensitive_tables() {
        // initial state moves on digit 0 to a state with a different output
        assert!(Dfao::new(2, vec![1, 1, 1, 1], vec![0, 1], 0).is_err());
        assert!(Dfao::new(2, vec![0, 1, 1, 0], vec![0, 1], 0).is_ok());
    }
}
