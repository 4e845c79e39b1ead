//! Automata for linear constraints `Σ aᵢ·xᵢ (= | ≤) c` over natural numbers.
//!
//! Reading a digit tuple msd-first maps the running value `V` to
//! `k·V + Σ aᵢ·dᵢ`. Once `V` leaves `[-(|c| + P), |c| + N]` (with `P` and `N`
//! the largest positive and negative per-step contributions) it can never
//! return, so the reachable values are finite.

use std::collections::BTreeMap;
use std::collections::HashMap;

use super::dfa::{letter_count, MultiTrackDfa};
use super::AutomataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

/// The atomic relations the compiler emits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// x + y = z
    Sum(String, String, String),
    /// x = y
    Equal(String, String),
    /// x < y
    Less(String, String),
    /// x = c
    Const(String, u64),
    /// x + c = y
    AddConst(String, u64, String),
    /// c·x = y
    Scale(u64, String, String),
}

pub fn atom_automaton(atom: &Atom, base: u32) -> Result<MultiTrackDfa, AutomataError> {
    let c = |v: u64| i64::try_from(v).map_err(|_| AutomataError::Unsupported(format!("constant {v} is too large")));
    let terms: Vec<(&str, i64)>;
    let (rel, rhs) = match atom {
        Atom::Sum(x, y, z) => {
            terms = vec![(x, 1), (y, 1), (z, -1)];
            (Relation::Eq, 0)
        }
        Atom::Equal(x, y) => {
            terms = vec![(x, 1), (y, -1)];
            (Relation::Eq, 0)
        }
        Atom::Less(x, y) => {
            terms = vec![(x, 1), (y, -1)];
            (Relation::Le, -1)
        }
        Atom::Const(x, v) => {
            terms = vec![(x, 1)];
            (Relation::Eq, c(*v)?)
        }
        Atom::AddConst(x, v, y) => {
            terms = vec![(y, 1), (x, -1)];
            (Relation::Eq, c(*v)?)
        }
        Atom::Scale(v, x, y) => {
            terms = vec![(x, c(*v)?), (y, -1)];
            (Relation::Eq, 0)
        }
    };
    linear_automaton(base, &terms, rel, rhs)
}

/// Automaton for `Σ coeff·var rel constant`. Repeated variables are merged;
/// a variable whose coefficients cancel still gets an (unconstrained) track.
pub fn linear_automaton(
    base: u32,
    terms: &[(&str, i64)],
    rel: Relation,
    constant: i64,
) -> Result<MultiTrackDfa, AutomataError> {
    if base < 2 {
        return Err(AutomataError::Malformed(format!("base {base} is below 2")));
    }
    let mut merged: BTreeMap<String, i64> = BTreeMap::new();
    for &(v, a) in terms {
        *merged.entry(v.to_string()).or_default() += a;
    }
    let vars: Vec<String> = merged.keys().cloned().collect();
    let coeffs: Vec<i64> = merged.values().copied().collect();
    let k = base as i64;
    let pos: i64 = coeffs.iter().filter(|&&a| a > 0).sum::<i64>() * (k - 1);
    let neg: i64 = -coeffs.iter().filter(|&&a| a < 0).sum::<i64>() * (k - 1);
    let hi = constant.abs() + neg;
    let lo = -(constant.abs() + pos);
    if hi.checked_sub(lo).is_none_or(|w| w > 50_000_000) {
        return Err(AutomataError::Unsupported(
            "linear constraint coefficients are too large".into(),
        ));
    }

    let letters = letter_count(base, vars.len());
    // digit contribution of every letter
    let contrib: Vec<i64> = (0..letters)
        .map(|l| {
            let mut rest = l as i64;
            coeffs
                .iter()
                .map(|&a| {
                    let d = rest % k;
                    rest /= k;
                    a * d
                })
                .sum()
        })
        .collect();

    // state 0: value 0; state 1: the sink below the window; state 2: above it
    const BELOW: u32 = 1;
    const ABOVE: u32 = 2;
    let below_accepts = rel == Relation::Le;
    let mut values: Vec<i64> = vec![0, i64::MIN, i64::MAX];
    let mut ids: HashMap<i64, u32> = HashMap::from([(0, 0)]);
    let mut trans = vec![0u32; 3 * letters];
    for l in 0..letters {
        trans[BELOW as usize * letters + l] = BELOW;
        trans[ABOVE as usize * letters + l] = ABOVE;
    }
    let mut head = 0;
    let mut order = vec![0u32];
    while head < order.len() {
        let s = order[head];
        head += 1;
        let v = values[s as usize];
        for (l, &d) in contrib.iter().enumerate() {
            let nv = k * v + d;
            let t = if nv < lo {
                BELOW
            } else if nv > hi {
                ABOVE
            } else {
                *ids.entry(nv).or_insert_with(|| {
                    values.push(nv);
                    trans.extend(std::iter::repeat_n(0, letters));
                    order.push(values.len() as u32 - 1);
                    values.len() as u32 - 1
                })
            };
            trans[s as usize * letters + l] = t;
        }
    }
    let accepting: Vec<bool> = values
        .iter()
        .enumerate()
        .map(|(s, &v)| match s as u32 {
            BELOW => below_accepts,
            ABOVE => false,
            _ => match rel {
                Relation::Eq => v == constant,
                Relation::Le => v <= constant,
            },
        })
        .collect();
    Ok(MultiTrackDfa::minimized(base, vars, &trans, &accepting))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn atom(a: Atom) -> MultiTrackDfa {
        atom_automaton(&a, 2).unwrap()
    }

    #[test]
    fn equality_and_order() {
        let eq = atom(Atom::Equal("x".into(), "y".into()));
        assert!(eq.accepts(&[5, 5]));
        assert!(!eq.accepts(&[5, 4]));
        let lt = atom(Atom::Less("x".into(), "y".into()));
        assert!(!lt.accepts(&[3, 2]));
        assert!(lt.accepts(&[2, 3]));
        assert!(!lt.accepts(&[3, 3]));
        let reflexive = atom(Atom::Equal("x".into(), "x".into()));
        assert!(reflexive.is_universal());
        assert_eq!(reflexive.vars(), ["x"]);
    }

    #[test]
    fn addition_digit_tuples() {
        let sum = atom(Atom::Sum("x".into(), "y".into(), "z".into()));
        // (1, 2, 3) as two msd-first tuples: (0,1,1) then (1,0,1)
        let first = sum.letter(&[0, 1, 1]);
        let second = sum.letter(&[1, 0, 1]);
        assert!(sum.is_accepting(sum.run([first, second])));
        assert!(sum.accepts(&[1, 2, 3]));
        assert!(!sum.accepts(&[1, 2, 4]));
    }

    #[test]
    fn addition_matches_arithmetic() {
        let sum = atom(Atom::Sum("x".into(), "y".into(), "z".into()));
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..10_000 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let x = state % 5000;
            let y = (state >> 20) % 5000;
            let z = if state & 1 == 0 { x + y } else { (state >> 40) % 10_000 };
            assert_eq!(sum.accepts(&[x, y, z]), x + y == z);
        }
    }

    #[test]
    fn other_bases() {
        let sum = atom_automaton(&Atom::Sum("x".into(), "y".into(), "z".into()), 3).unwrap();
        for x in 0..30 {
            for y in 0..30 {
                assert!(sum.accepts(&[x, y, x + y]));
                assert!(!sum.accepts(&[x, y, x + y + 1]));
            }
        }
    }

    proptest! {
        #[test]
        fn linear_constraints_match_evaluation(
            a in -3i64..=3, b in -3i64..=3, c in -6i64..=6, le in any::<bool>(),
            x in 0u64..200, y in 0u64..200, pad in 0usize..3,
        ) {
            let rel = if le { Relation::Le } else { Relation::Eq };
            let dfa = linear_automaton(2, &[("x", a), ("y", b)], rel, c).unwrap();
            let lhs = a * x as i64 + b * y as i64;
            let expected = if le { lhs <= c } else { lhs == c };
            let enc = dfa.encode(&[x, y], pad);
            prop_assert_eq!(dfa.is_accepting(dfa.run(enc)), expected);
        }

        #[test]
        fn scaling_and_offsets(c in 0u64..12, x in 0u64..300, y in 0u64..300) {
            let scale = atom(Atom::Scale(c, "x".into(), "y".into()));
            prop_assert_eq!(scale.accepts(&[x, y]), c * x == y);
            let off = atom(Atom::AddConst("x".into(), c, "y".into()));
            prop_assert_eq!(off.accepts(&[x, y]), x + c == y);
            let konst = atom(Atom::Const("x".into(), c));
            prop_assert_eq!(konst.accepts(&[x]), x == c);
        }
    }
}
