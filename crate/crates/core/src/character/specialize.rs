use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poly::{LaurentPoly, RationalFn};

/// Values that can have frozen variables set to 1.
pub trait FrozenSpecialize: Sized {
    fn lattice_of(&self) -> &Lattice;
    fn collapse_to(&self, target: &Lattice, keep: &[Option<usize>]) -> Result<Self>;
}

impl FrozenSpecialize for LaurentPoly {
    fn lattice_of(&self) -> &Lattice {
        self.lattice()
    }

    fn collapse_to(&self, target: &Lattice, keep: &[Option<usize>]) -> Result<Self> {
        Ok(self.collapse(target, keep))
    }
}

impl FrozenSpecialize for RationalFn {
    fn lattice_of(&self) -> &Lattice {
        self.lattice()
    }

    fn collapse_to(&self, target: &Lattice, keep: &[Option<usize>]) -> Result<Self> {
        self.collapse(target, keep)
    }
}

/// Sets `a_f = 1` for every `f` in `subset`; the result lives over the lattice
/// with those labels removed.
pub fn specialize_frozen<P: FrozenSpecialize, S: AsRef<str>>(p: &P, subset: &[S]) -> Result<P> {
    let lat = p.lattice_of();
    for f in subset {
        if !lat.is_frozen_label(f.as_ref())? {
            return Err(Error::NotFrozen(f.as_ref().to_string()));
        }
    }
    let target = lat.without(subset)?.shared();
    let keep: Vec<Option<usize>> = lat.labels().iter().map(|l| target.position(l)).collect();
    p.collapse_to(&target, &keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::initial_characters;
    use crate::seed::fixtures;

    #[test]
    fn drop_frozen() {
        let cs = initial_characters(&fixtures::a2f()).unwrap().mutate("1").unwrap();
        let a = cs.a("1").unwrap();
        assert_eq!(specialize_frozen(a, &["f"]).unwrap().render("a"), "a1^-1 + a1^-1*a2");
        assert_eq!(&specialize_frozen::<_, &str>(a, &[]).unwrap(), a);
        assert!(matches!(specialize_frozen(a, &["1"]), Err(Error::NotFrozen(_))));
        assert!(matches!(specialize_frozen(a, &["z"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn commutes_with_mutation() {
        let big = initial_characters(&fixtures::a2f()).unwrap().mutate_path(&["1", "2"]).unwrap();
        let small = initial_characters(&fixtures::a2()).unwrap().mutate_path(&["1", "2"]).unwrap();
        let got: Vec<RationalFn> = ["1", "2"].iter().map(|l| specialize_frozen(big.a(l).unwrap(), &["f"]).unwrap()).collect();
        let want: Vec<RationalFn> = ["1", "2"].iter().map(|l| small.a(l).unwrap().clone()).collect();
        assert_eq!(got, want);
    }
}
