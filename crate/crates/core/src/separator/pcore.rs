//! Normal core of a subgroup over a finite transversal.

use crate::freegrp::Word;

/// Membership in `N* = ∩_t t·S·t⁻¹` for `t` in `transversal`, given
/// membership in `S`: `w ∈ t S t⁻¹` iff `t⁻¹ w t ∈ S`.
pub fn p_core<F>(member: F, transversal: Vec<Word>) -> impl Fn(&Word) -> bool
where
    F: Fn(&Word) -> bool,
{
    move |w: &Word| transversal.iter().all(|t| member(&t.inverse().concat(w).concat(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[i32]) -> Word {
        Word::from_letters(l)
    }

    // K = {x-exponent sum even} in F(x, y); S ⊴ K is the kernel of K → Z/2
    // counting y-letters read at even x-parity. S is not normal in F.
    fn in_s(v: &Word) -> bool {
        let mut parity = 0;
        let mut count = 0;
        for &l in v.letters() {
            match l.abs() {
                1 => parity ^= 1,
                _ if parity == 0 => count ^= 1,
                _ => {}
            }
        }
        parity == 0 && count == 0
    }

    fn in_k(v: &Word) -> bool {
        v.exponent_sums(2)[0] % 2 == 0
    }

    #[test]
    fn trivial_transversal_is_unchanged() {
        let core = p_core(in_s, vec![Word::identity()]);
        for v in [w(&[2]), w(&[1, 2, -1]), w(&[1, 1]), w(&[2, 2])] {
            assert_eq!(core(&v), in_s(&v));
        }
    }

    #[test]
    fn normal_subgroup_is_its_own_core() {
        let core = p_core(in_k, vec![Word::identity(), w(&[1])]);
        for v in [w(&[2]), w(&[1, 2, -1]), w(&[1, 1]), w(&[1]), w(&[1, 2])] {
            assert_eq!(core(&v), in_k(&v));
        }
    }

    #[test]
    fn asymmetric_subgroup_shrinks() {
        let core = p_core(in_s, vec![Word::identity(), w(&[1])]);
        let g = w(&[1, 2, -1]);
        assert!(in_s(&g));
        assert!(!core(&g));
        // squares of y and x² stay in the core
        assert!(core(&w(&[2, 2])) && core(&w(&[1, 1])));
    }
}
