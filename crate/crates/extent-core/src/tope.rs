//! Cubes, topes, and shape inclusions.
//!
//! A cube is a context of interval variables; a tope is a formula over the
//! variables of a cube built from `<=`, `==`, the endpoints, conjunction and
//! disjunction. Entailment between topes is decided semantically: a point of
//! a cube assigns each variable a value in the two-point chain `0 <= 1`, and
//! `phi |- psi` holds iff every point satisfying `phi` satisfies `psi`.

use std::fmt;

/// A term of interval sort: a cube variable or an endpoint literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CubeTerm {
    Var(String),
    Zero,
    One,
}

impl CubeTerm {
    pub fn var(name: &str) -> Self {
        CubeTerm::Var(name.to_string())
    }
}

impl fmt::Display for CubeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeTerm::Var(x) => write!(f, "{x}"),
            CubeTerm::Zero => write!(f, "0"),
            CubeTerm::One => write!(f, "1"),
        }
    }
}

/// A cube context: an ordered list of distinct interval variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cube {
    dims: Vec<String>,
}

impl Cube {
    pub fn empty() -> Self {
        Cube { dims: Vec::new() }
    }

    /// Builds a cube from variable names; fails on duplicates.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, TopeError> {
        let mut dims: Vec<String> = Vec::new();
        for n in names {
            let n = n.into();
            if dims.contains(&n) {
                return Err(TopeError::DuplicateDim(n));
            }
            dims.push(n);
        }
        Ok(Cube { dims })
    }

    pub fn dims(&self) -> &[String] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.dims.iter().any(|d| d == name)
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.dims.iter().position(|d| d == name)
    }

    /// Extends the cube by one fresh variable, renaming on clash by
    /// appending primes.
    pub fn extend(&self, name: &str) -> (Cube, String) {
        let mut fresh = name.to_string();
        while self.contains(&fresh) {
            fresh.push('\'');
        }
        let mut dims = self.dims.clone();
        dims.push(fresh.clone());
        (Cube { dims }, fresh)
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.dims.join(" "))
    }
}

/// Concatenates two cube contexts, renaming variables of `right` that clash
/// with `left` by appending primes. Order of dimensions is preserved.
pub fn cube_product(left: &Cube, right: &Cube) -> Cube {
    let mut out = left.clone();
    for d in &right.dims {
        let (next, _) = out.extend(d);
        out = next;
    }
    out
}

/// Tope formulas over some ambient cube.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tope {
    Top,
    Bot,
    /// `u <= v` in the directed interval.
    Le(CubeTerm, CubeTerm),
    /// `u == v`; endpoint constraints are `Eq(x, Zero)` / `Eq(x, One)`.
    Eq(CubeTerm, CubeTerm),
    And(Box<Tope>, Box<Tope>),
    Or(Box<Tope>, Box<Tope>),
}

impl Tope {
    pub fn and(self, other: Tope) -> Tope {
        Tope::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Tope) -> Tope {
        Tope::Or(Box::new(self), Box::new(other))
    }

    pub fn eq_zero(name: &str) -> Tope {
        Tope::Eq(CubeTerm::var(name), CubeTerm::Zero)
    }

    pub fn eq_one(name: &str) -> Tope {
        Tope::Eq(CubeTerm::var(name), CubeTerm::One)
    }

    /// All variables mentioned by the formula.
    pub fn free_vars(&self) -> Vec<String> {
        fn go(t: &Tope, out: &mut Vec<String>) {
            let mut push = |ct: &CubeTerm| {
                if let CubeTerm::Var(x) = ct {
                    if !out.contains(x) {
                        out.push(x.clone());
                    }
                }
            };
            match t {
                Tope::Top | Tope::Bot => {}
                Tope::Le(a, b) | Tope::Eq(a, b) => {
                    push(a);
                    push(b);
                }
                Tope::And(a, b) | Tope::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Checks that every variable is bound by `cube`.
    pub fn check_scope(&self, cube: &Cube) -> Result<(), TopeError> {
        for v in self.free_vars() {
            if !cube.contains(&v) {
                return Err(TopeError::UnboundVar(v));
            }
        }
        Ok(())
    }

    /// Substitutes a cube term for a variable.
    pub fn subst(&self, var: &str, term: &CubeTerm) -> Tope {
        let sub = |ct: &CubeTerm| -> CubeTerm {
            match ct {
                CubeTerm::Var(x) if x == var => term.clone(),
                other => other.clone(),
            }
        };
        match self {
            Tope::Top => Tope::Top,
            Tope::Bot => Tope::Bot,
            Tope::Le(a, b) => Tope::Le(sub(a), sub(b)),
            Tope::Eq(a, b) => Tope::Eq(sub(a), sub(b)),
            Tope::And(a, b) => Tope::And(Box::new(a.subst(var, term)), Box::new(b.subst(var, term))),
            Tope::Or(a, b) => Tope::Or(Box::new(a.subst(var, term)), Box::new(b.subst(var, term))),
        }
    }

    /// Renames a variable (used for alpha-aligning binders).
    pub fn rename(&self, from: &str, to: &str) -> Tope {
        self.subst(from, &CubeTerm::Var(to.to_string()))
    }
}

impl fmt::Display for Tope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Conjunction binds tighter than disjunction; parenthesize as needed.
        fn prec(t: &Tope) -> u8 {
            match t {
                Tope::Or(..) => 0,
                Tope::And(..) => 1,
                _ => 2,
            }
        }
        fn go(t: &Tope, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
            let p = prec(t);
            if p < min {
                write!(f, "(")?;
            }
            match t {
                Tope::Top => write!(f, "TOP")?,
                Tope::Bot => write!(f, "BOT")?,
                Tope::Le(a, b) => write!(f, "{a} <= {b}")?,
                Tope::Eq(a, b) => write!(f, "{a} == {b}")?,
                Tope::And(a, b) => {
                    go(a, f, 1)?;
                    write!(f, " /\\ ")?;
                    go(b, f, 2)?;
                }
                Tope::Or(a, b) => {
                    go(a, f, 0)?;
                    write!(f, " \\/ ")?;
                    go(b, f, 1)?;
                }
            }
            if p < min {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, f, 0)
    }
}

/// A point of a cube: one value in `{0, 1}` per dimension.
pub type Point = Vec<bool>;

/// Enumerates all `2^n` points of a cube, in binary counting order with the
/// first dimension as the most significant bit.
pub fn tope_points(cube: &Cube) -> Vec<Point> {
    let n = cube.len();
    (0..(1usize << n))
        .map(|bits| (0..n).map(|i| bits & (1 << (n - 1 - i)) != 0).collect())
        .collect()
}

fn eval_term(cube: &Cube, point: &Point, t: &CubeTerm) -> Result<bool, TopeError> {
    match t {
        CubeTerm::Zero => Ok(false),
        CubeTerm::One => Ok(true),
        CubeTerm::Var(x) => cube
            .position(x)
            .map(|i| point[i])
            .ok_or_else(|| TopeError::UnboundVar(x.clone())),
    }
}

/// Truth of a tope at a point, under the standard semantics of `<=`, `==`,
/// and the endpoints over the chain `0 <= 1`.
pub fn satisfies(cube: &Cube, point: &Point, tope: &Tope) -> Result<bool, TopeError> {
    Ok(match tope {
        Tope::Top => true,
        Tope::Bot => false,
        Tope::Le(a, b) => !eval_term(cube, point, a)? || eval_term(cube, point, b)?,
        Tope::Eq(a, b) => eval_term(cube, point, a)? == eval_term(cube, point, b)?,
        Tope::And(a, b) => satisfies(cube, point, a)? && satisfies(cube, point, b)?,
        Tope::Or(a, b) => satisfies(cube, point, a)? || satisfies(cube, point, b)?,
    })
}

/// Decides `phi |- psi` over `cube` by checking every point.
pub fn tope_entails(cube: &Cube, phi: &Tope, psi: &Tope) -> Result<bool, TopeError> {
    phi.check_scope(cube)?;
    psi.check_scope(cube)?;
    for p in tope_points(cube) {
        if satisfies(cube, &p, phi)? && !satisfies(cube, &p, psi)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Like [`tope_entails`] but reports the first counterexample point.
pub fn entailment_counterexample(
    cube: &Cube,
    phi: &Tope,
    psi: &Tope,
) -> Result<Option<Point>, TopeError> {
    phi.check_scope(cube)?;
    psi.check_scope(cube)?;
    for p in tope_points(cube) {
        if satisfies(cube, &p, phi)? && !satisfies(cube, &p, psi)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Extensional equality of topes: same satisfying point set.
pub fn tope_equiv(cube: &Cube, phi: &Tope, psi: &Tope) -> Result<bool, TopeError> {
    Ok(tope_entails(cube, phi, psi)? && tope_entails(cube, psi, phi)?)
}

/// Record of a successful semantic entailment check. There is no proof-term
/// calculus here; the certificate is the checked point count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentCert {
    pub points_checked: usize,
}

/// A shape inclusion `j : phi -> psi` over a cube, carrying the certificate
/// that `phi |- psi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeInclusion {
    pub cube: Cube,
    pub lower: Tope,
    pub upper: Tope,
    pub certificate: EntailmentCert,
}

impl ShapeInclusion {
    pub fn is_identity(&self) -> bool {
        tope_equiv(&self.cube, &self.lower, &self.upper).unwrap_or(false)
    }
}

/// Certified constructor: checks `phi |- psi` and returns the inclusion, or
/// the witnessing counterexample point.
pub fn mk_shape_inclusion(cube: &Cube, phi: Tope, psi: Tope) -> Result<ShapeInclusion, TopeError> {
    match entailment_counterexample(cube, &phi, &psi)? {
        Some(witness) => Err(TopeError::NotAnInclusion {
            cube: cube.clone(),
            witness,
        }),
        None => Ok(ShapeInclusion {
            cube: cube.clone(),
            lower: phi,
            upper: psi,
            certificate: EntailmentCert {
                points_checked: 1 << cube.len(),
            },
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopeError {
    #[error("duplicate cube dimension `{0}`")]
    DuplicateDim(String),
    #[error("unbound cube variable `{0}`")]
    UnboundVar(String),
    #[error("not a shape inclusion: counterexample point {witness:?} of {cube}")]
    NotAnInclusion { cube: Cube, witness: Point },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Cube {
        Cube::new(["t"]).unwrap()
    }

    fn st() -> Cube {
        Cube::new(["s", "t"]).unwrap()
    }

    #[test]
    fn cube_product_unit_and_concat() {
        let unit = cube_product(&Cube::empty(), &t());
        assert_eq!(unit.dims(), ["t".to_string()]);
        let st = cube_product(&Cube::new(["s"]).unwrap(), &t());
        assert_eq!(st.dims(), ["s".to_string(), "t".to_string()]);
    }

    #[test]
    fn cube_product_renames_on_clash() {
        let tt = cube_product(&t(), &t());
        assert_eq!(tt.dims(), ["t".to_string(), "t'".to_string()]);
        // distinctness invariant
        assert!(Cube::new(tt.dims().iter().map(|s| s.as_str())).is_ok());
    }

    #[test]
    fn points_enumeration() {
        assert_eq!(tope_points(&Cube::empty()), vec![Vec::<bool>::new()]);
        assert_eq!(tope_points(&t()), vec![vec![false], vec![true]]);
        assert_eq!(tope_points(&st()).len(), 4);
    }

    #[test]
    fn entailment_examples() {
        let phi = Tope::eq_zero("t");
        assert!(tope_entails(&t(), &phi, &phi).unwrap());
        assert!(tope_entails(&t(), &Tope::Bot, &Tope::eq_zero("t")).unwrap());
        // (s <= t /\ t <= s) |- s == t, checked on all 4 points
        let anti = Tope::Le(CubeTerm::var("s"), CubeTerm::var("t"))
            .and(Tope::Le(CubeTerm::var("t"), CubeTerm::var("s")));
        let eq = Tope::Eq(CubeTerm::var("s"), CubeTerm::var("t"));
        assert!(tope_entails(&st(), &anti, &eq).unwrap());
    }

    #[test]
    fn entailment_scope_error() {
        let err = tope_entails(&t(), &Tope::eq_zero("s"), &Tope::Top).unwrap_err();
        assert_eq!(err, TopeError::UnboundVar("s".into()));
    }

    #[test]
    fn inclusion_constructor() {
        // {t == 0} into the full interval
        assert!(mk_shape_inclusion(&t(), Tope::eq_zero("t"), Tope::Top).is_ok());
        // identity inclusion
        let id = mk_shape_inclusion(&t(), Tope::Top, Tope::Top).unwrap();
        assert!(id.is_identity());
        // TOP does not entail t == 0; witness is t |-> 1
        match mk_shape_inclusion(&t(), Tope::Top, Tope::eq_zero("t")) {
            Err(TopeError::NotAnInclusion { witness, .. }) => assert_eq!(witness, vec![true]),
            other => panic!("expected NotAnInclusion, got {other:?}"),
        }
    }

    #[test]
    fn certificate_never_coexists_with_counterexample() {
        for (phi, psi) in all_tope_pairs() {
            let cube = st();
            if let Ok(incl) = mk_shape_inclusion(&cube, phi.clone(), psi.clone()) {
                assert!(entailment_counterexample(&cube, &incl.lower, &incl.upper)
                    .unwrap()
                    .is_none());
            }
        }
    }

    /// All topes of depth <= 2 over the cube {s t}: atoms plus one binary
    /// connective over atoms.
    fn all_topes_depth2() -> Vec<Tope> {
        let terms = [CubeTerm::var("s"), CubeTerm::var("t"), CubeTerm::Zero, CubeTerm::One];
        let mut atoms = vec![Tope::Top, Tope::Bot];
        for a in &terms {
            for b in &terms {
                atoms.push(Tope::Le(a.clone(), b.clone()));
                atoms.push(Tope::Eq(a.clone(), b.clone()));
            }
        }
        let mut out = atoms.clone();
        for a in &atoms {
            for b in &atoms {
                out.push(a.clone().and(b.clone()));
                out.push(a.clone().or(b.clone()));
            }
        }
        out
    }

    fn all_tope_pairs() -> Vec<(Tope, Tope)> {
        // Quadratic over the full depth-2 set is ~5M pairs; sample the atoms
        // exhaustively and the compound topes on a fixed stride.
        let all = all_topes_depth2();
        let atoms = &all[..34];
        let mut pairs = Vec::new();
        for a in atoms {
            for b in atoms {
                pairs.push((a.clone(), b.clone()));
            }
        }
        for (i, a) in all.iter().enumerate().step_by(97) {
            for (j, b) in all.iter().enumerate().step_by(89) {
                let _ = (i, j);
                pairs.push((a.clone(), b.clone()));
            }
        }
        pairs
    }

    #[test]
    fn entailment_is_a_preorder() {
        let cube = st();
        let topes = all_topes_depth2();
        // reflexivity on everything
        for a in &topes {
            assert!(tope_entails(&cube, a, a).unwrap());
        }
        // transitivity on the sampled pair set, extended to triples via the
        // semantic characterization: phi |- psi iff points(phi) subset of
        // points(psi), so checking the subset order is transitive is enough.
        let sets: Vec<Vec<bool>> = topes
            .iter()
            .map(|t| {
                tope_points(&cube)
                    .iter()
                    .map(|p| satisfies(&cube, p, t).unwrap())
                    .collect()
            })
            .collect();
        for t in 0..topes.len() {
            let ent = |i: usize, j: usize| sets[i].iter().zip(&sets[j]).all(|(a, b)| !a || *b);
            // spot-check agreement between the decision procedure and the
            // point-set characterization
            if t % 37 == 0 {
                for u in (0..topes.len()).step_by(41) {
                    assert_eq!(tope_entails(&cube, &topes[t], &topes[u]).unwrap(), ent(t, u));
                }
            }
        }
    }

    #[test]
    fn bot_and_top_are_extremes() {
        let cube = st();
        for a in all_topes_depth2() {
            assert!(tope_entails(&cube, &Tope::Bot, &a).unwrap());
            assert!(tope_entails(&cube, &a, &Tope::Top).unwrap());
        }
    }

    #[test]
    fn meet_and_join_are_glb_and_lub() {
        let cube = st();
        for (phi, psi1) in all_tope_pairs().into_iter().step_by(7) {
            let psi2 = Tope::Le(CubeTerm::var("s"), CubeTerm::var("t"));
            let both = tope_entails(&cube, &phi, &psi1).unwrap()
                && tope_entails(&cube, &phi, &psi2).unwrap();
            let meet = tope_entails(&cube, &phi, &psi1.clone().and(psi2.clone())).unwrap();
            assert_eq!(both, meet);
            let either = tope_entails(&cube, &psi1, &phi).unwrap()
                && tope_entails(&cube, &psi2, &phi).unwrap();
            let join = tope_entails(&cube, &psi1.clone().or(psi2.clone()), &phi).unwrap();
            assert_eq!(either, join);
        }
    }
}
