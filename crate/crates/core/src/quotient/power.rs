use crate::error::{Error, Result};
use crate::words::{cyclic_reduce, root_of, Presentation, PresentationKind, Word};

/// `F/⟨⟨hⁿ⟩⟩` over a free base. The relator is stored root-normalized:
/// `hⁿ = u^N` with `u` not a proper power.
#[derive(Clone, Debug)]
pub struct PowerQuotient {
    pub base: Presentation,
    pub h: Word,
    pub n: usize,
    pub root: Word,
    pub exponent: usize,
    pub quotient: Presentation,
    /// `(N − 1)·|u|`: nontrivial kernel elements have length above this.
    pub girth_bound: usize,
}

pub fn make_power_quotient(base: &Presentation, h: &Word, n: usize) -> Result<PowerQuotient> {
    if !base.is_free() {
        return Err(Error::input("power quotients need a free base"));
    }
    if n < 2 {
        return Err(Error::input("the exponent of a power quotient must be at least 2"));
    }
    let gens = base.generators();
    gens.check(h)?;
    let (core, _) = cyclic_reduce(gens, &gens.mul(&Word::empty(), h));
    if core.is_empty() {
        return Err(Error::input("h is trivial"));
    }
    let quotient = Presentation::new(gens.clone(), vec![core.pow(n)])?;
    let (root, exponent) = match quotient.kind() {
        PresentationKind::OneRelatorPower { root, exponent } => (root.clone(), *exponent),
        other => unreachable!("a proper power relator classifies as {other:?}"),
    };
    debug_assert_eq!(root_of(&core)?.0.len(), root.len());
    Ok(PowerQuotient {
        base: base.clone(),
        h: core,
        n,
        girth_bound: (exponent - 1) * root.len(),
        root,
        exponent,
        quotient,
    })
}
