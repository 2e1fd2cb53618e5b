//! Changes of basis and the gradient flip.

use super::complex::{TwistedComplex, TOP};
use super::endo::{Endo, Propagator};
use crate::algebra::{LaurentPoly, Matrix, RatFn};
use crate::error::MorseError;

/// Scale factor exponent of `S_p` at a generator: `S_p(p) = t^{-sign} p`.
fn sp_exp(is_p: bool, sign: i32) -> i64 {
    if is_p {
        -(sign as i64)
    } else {
        0
    }
}

/// Conjugates `(∂, g)` by the rescaling `S_p` that multiplies `p` by
/// `t^{-sign}` and fixes every other generator.
///
/// Returns `(S_p⁻¹ ∂ S_p, S_p⁻¹ g S_p)`. Conjugating with `sign` and then with
/// `-sign` is the identity.
pub fn conjugate_by_sp(
    c: &TwistedComplex,
    g: &Propagator,
    p: &str,
    sign: i32,
) -> Result<(TwistedComplex, Propagator), MorseError> {
    if sign != 1 && sign != -1 {
        return Err(MorseError::InvalidSlide(format!("S_p sign must be ±1, got {}", sign)));
    }
    let (pd, pi) = c.locate(p).ok_or_else(|| MorseError::UnknownGenerator(p.to_string()))?;
    let e = |d: usize, i: usize| sp_exp(d == pd && i == pi, sign);
    let boundary: [Matrix<LaurentPoly>; 3] = std::array::from_fn(|k| {
        let d = k + 1;
        let m = c.boundary(d);
        Matrix::from_fn(m.rows(), m.cols(), |r, col| m.get(r, col).mul_t_pow(e(d, col) - e(d - 1, r)))
    });
    let dims = c.dims();
    let blocks: [Matrix<RatFn>; 4] = std::array::from_fn(|d| {
        let m = g.block(d);
        Matrix::from_fn(m.rows(), m.cols(), |r, col| m.get(r, col).mul_t_pow(e(d, col) - e(d + 1, r)))
    });
    let c2 = TwistedComplex::new(c.all_generators().clone(), boundary)?;
    let g2 = Endo::from_blocks(dims, 1, blocks)?;
    Ok((c2, Propagator::new_unchecked(g2)))
}

/// The complex half of [`reverse_complex`].
pub fn reversed(c: &TwistedComplex) -> TwistedComplex {
    let gens: [Vec<String>; 4] = std::array::from_fn(|j| c.generators(TOP - j).to_vec());
    let boundary: [Matrix<LaurentPoly>; 3] =
        std::array::from_fn(|k| c.boundary(TOP - k).transpose().map(LaurentPoly::bar));
    TwistedComplex::new(gens, boundary).expect("reversal preserves names and shapes")
}

/// Models the flip `ξ -> -ξ`: the index `i` generators become index `3 - i`,
/// and both `∂` and `g` are replaced by the bar-involuted transposes.
pub fn reverse_complex(c: &TwistedComplex, g: &Propagator) -> (TwistedComplex, Propagator) {
    (reversed(c), Propagator::new_unchecked(reversed_map(g)))
}

/// The map half of [`reverse_complex`], for any degree one `g`.
pub fn reversed_map(g: &Endo) -> Endo {
    let d = g.dims();
    let dims = [d[3], d[2], d[1], d[0]];
    let blocks: [Matrix<RatFn>; 4] = std::array::from_fn(|j| {
        if j < TOP {
            g.block(TOP - 1 - j).transpose().map(RatFn::bar)
        } else {
            Matrix::zeros(0, dims[TOP])
        }
    });
    Endo::from_blocks(dims, 1, blocks).expect("reversal preserves shapes")
}

/// The unique nonzero entry of an elementary degree-0 endomorphism, as
/// `(degree, source, target, value)`.
pub fn elementary_entry(h: &Endo) -> Result<Option<(usize, usize, usize, LaurentPoly)>, MorseError> {
    if h.degree() != 0 {
        return Err(MorseError::InvalidSlide(format!("h has degree {}, expected 0", h.degree())));
    }
    let mut found = None;
    for d in 0..=TOP {
        for (r, col, v) in h.block(d).entries() {
            if v.is_zero() {
                continue;
            }
            if found.is_some() {
                return Err(MorseError::InvalidSlide("h has more than one nonzero entry".into()));
            }
            if r == col {
                return Err(MorseError::InvalidSlide("h has a diagonal entry".into()));
            }
            let l = v
                .as_laurent()
                .ok_or_else(|| MorseError::InvalidSlide("entry of h is not a Laurent polynomial".into()))?;
            found = Some((d, col, r, l.clone()));
        }
    }
    Ok(found)
}

/// Applies the basis change `1 + h` for an elementary `h`: returns
/// `∂' = (1+h)∂(1-h)` and `g' = (1+h)g(1-h)`.
pub fn handle_slide(c: &TwistedComplex, g: &Propagator, h: &Endo) -> Result<(TwistedComplex, Propagator), MorseError> {
    if h.dims() != c.dims() {
        return Err(MorseError::InvalidSlide("h does not act on this complex".into()));
    }
    if elementary_entry(h)?.is_none() {
        return Ok((c.clone(), g.clone()));
    }
    let one = Endo::identity(c.dims());
    let plus = one.add(h)?;
    let minus = one.sub(h)?;
    let d = plus.compose(&Endo::boundary(c))?.compose(&minus)?;
    let boundary: [Matrix<LaurentPoly>; 3] = std::array::from_fn(|k| {
        d.block(k + 1).map(|x| x.as_laurent().expect("elementary change of basis keeps Λ entries").clone())
    });
    let c2 = TwistedComplex::new(c.all_generators().clone(), boundary)?;
    let g2 = plus.compose(g)?.compose(&minus)?;
    Ok((c2, Propagator::new_unchecked(g2)))
}

/// Checks `g' - g = hg - gh` and `g' - g = hg' - g'h`.
pub fn slide_difference_holds(g: &Endo, g2: &Endo, h: &Endo) -> bool {
    let lhs = match g2.sub(g) {
        Ok(x) => x,
        Err(_) => return false,
    };
    let comm = |x: &Endo| -> Option<Endo> { h.compose(x).ok()?.sub(&x.compose(h).ok()?).ok() };
    comm(g).as_ref() == Some(&lhs) && comm(g2).as_ref() == Some(&lhs)
}

/// The degree-0 endomorphism with a single entry: `x` maps `source` to
/// `value * target`, both in degree `d`.
pub fn elementary(dims: [usize; 4], d: usize, source: usize, target: usize, value: LaurentPoly) -> Endo {
    let mut h = Endo::zero(dims, 0);
    h.set_entry((d, source), (d, target), RatFn::from(value));
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::morse::endo::{find_propagator, is_propagator};

    fn tm1() -> LaurentPoly {
        LaurentPoly::from_terms([(1, q(1)), (0, q(-1))])
    }

    fn interval() -> TwistedComplex {
        let gens = [vec!["q".to_string()], vec!["p".to_string()], vec![], vec![]];
        let b1 = Matrix::from_rows(vec![vec![tm1()]]).unwrap();
        TwistedComplex::new(gens, [b1, Matrix::zeros(1, 0), Matrix::zeros(0, 0)]).unwrap()
    }

    #[test]
    fn sp_on_interval() {
        let c = interval();
        let g = find_propagator(&c).unwrap();
        let (c2, g2) = conjugate_by_sp(&c, &g, "p", 1).unwrap();
        assert_eq!(*c2.boundary(1).get(0, 0), tm1().mul_t_pow(-1));
        let expect = RatFn::new(LaurentPoly::t_pow(1), tm1()).unwrap();
        assert_eq!(g2.entry((0, 0), (1, 0)), expect);
        assert!(is_propagator(&c2, &g2));
        let (c3, g3) = conjugate_by_sp(&c2, &g2, "p", -1).unwrap();
        assert_eq!((c3, g3), (c, g));
    }

    #[test]
    fn sp_unknown_generator() {
        let c = interval();
        let g = find_propagator(&c).unwrap();
        assert!(matches!(conjugate_by_sp(&c, &g, "zz", 1), Err(MorseError::UnknownGenerator(_))));
    }

    #[test]
    fn reverse_interval() {
        let c = interval();
        let g = find_propagator(&c).unwrap();
        let (r, rg) = reverse_complex(&c, &g);
        assert_eq!(r.locate("q"), Some((3, 0)));
        assert_eq!(r.locate("p"), Some((2, 0)));
        assert_eq!(*r.boundary(3).get(0, 0), tm1().bar());
        assert!(is_propagator(&r, &rg));
        assert_eq!(reverse_complex(&r, &rg), (c, g));
    }

    #[test]
    fn reverse_empty() {
        let c = TwistedComplex::empty();
        let g = find_propagator(&c).unwrap();
        assert_eq!(reverse_complex(&c, &g).0, c);
    }

    #[test]
    fn zero_slide_is_identity() {
        let c = interval();
        let g = find_propagator(&c).unwrap();
        let h = Endo::zero(c.dims(), 0);
        assert_eq!(handle_slide(&c, &g, &h).unwrap(), (c, g));
    }

    #[test]
    fn slide_rejects_diagonal() {
        let c = interval();
        let g = find_propagator(&c).unwrap();
        let mut h = Endo::zero(c.dims(), 0);
        h.set_entry((1, 0), (1, 0), RatFn::one());
        assert!(matches!(handle_slide(&c, &g, &h), Err(MorseError::InvalidSlide(_))));
    }
}
