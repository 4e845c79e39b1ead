//! Word automata agree with the morphic words they are built from.

use pwalnut::automata::{dfao_from_text, dfao_to_text, Dfao};
use pwalnut::logic::DEFAULT_STATE_LIMIT;
use pwalnut::morphism::{catalog, Morphism};

const N: usize = 1 << 16;

/// The automaton for a catalog word whose generator is uniform, built the
/// same way a script would: promote, then one image per coding.
fn automaton(id: &str) -> Option<Dfao> {
    let named = catalog::lookup(id).unwrap();
    let width = named.generator.uniform_width()?;
    let coding = Morphism::identity(named.generator.domain_size() as u8);
    let mut d = Dfao::from_uniform_fixed_point(&named.generator, &coding, named.seed, width as u32).unwrap();
    for m in &named.images {
        d = d.image(m, DEFAULT_STATE_LIMIT).unwrap();
    }
    Some(d)
}

pub fn uniform_catalog_words() {
    let mut checked = 0;
    for id in catalog::IDS {
        let Some(d) = automaton(id) else { continue };
        let w = catalog::named_word_prefix(id, N).unwrap();
        assert_eq!(d.prefix(N), w.codes(), "{id}");
        let m = d.minimized();
        assert_eq!(m.prefix(N), w.codes(), "{id} minimized");
        assert_eq!(dfao_from_text(&dfao_to_text(&m)).unwrap(), m, "{id} text");
        checked += 1;
    }
    // every id except the non-uniform vtm family
    assert_eq!(checked, catalog::IDS.len() - 3);
}

pub fn builtins_match_their_morphisms() {
    let tm = catalog::named_word_prefix("tm", N).unwrap();
    assert_eq!(Dfao::builtin("T").unwrap().prefix(N), tm.codes());
    let vtm = catalog::named_word_prefix("vtm", N).unwrap();
    let auto = Dfao::builtin("VTM").unwrap();
    assert_eq!(auto.prefix(N), vtm.codes());
    // the vtm images go through the built-in automaton
    for (id, m) in [("h_vtm", catalog::h()), ("g_vtm", catalog::g_full())] {
        let img = auto.image(&m, DEFAULT_STATE_LIMIT).unwrap();
        let w = catalog::named_word_prefix(id, N).unwrap();
        assert_eq!(img.prefix(N), w.codes(), "{id}");
    }
}

pub fn displayed_prefixes() {
    assert_eq!(
        catalog::named_word_prefix("tm", 32).unwrap().to_string(),
        "01101001100101101001011001101001"
    );
    assert_eq!(
        catalog::named_word_prefix("vtm", 24).unwrap().to_string(),
        "012021012102012021020121"
    );
}

#[test]
fn eval_uses_the_least_significant_digit_last() {
    let t = Dfao::builtin("T").unwrap();
    for n in 0..1000u64 {
        assert_eq!(t.eval(n), n.count_ones() % 2);
    }
}

// plain functions above so the acceptance run can call them too

#[test]
fn catalog() {
    uniform_catalog_words()
}

#[test]
fn builtins() {
    builtins_match_their_morphisms()
}

#[test]
fn prefixes() {
    displayed_prefixes()
}
