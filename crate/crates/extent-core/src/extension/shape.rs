//! Semantic shapes: the designated interval of each base category and the
//! subpresheaves carved out by tope satisfaction.

use std::sync::Arc;

use crate::presheaf::{
    delta_cat, subpresheaf, BaseId, FinCat, FinPresheaf, ObjId, PresheafMap, SubPresheaf,
};
use crate::tope::{Cube, CubeTerm, ShapeInclusion, Tope};

use super::ExtError;

/// The directed-interval presheaf of a base category, with a valuation of
/// each element as a monotone vector over the two-point chain. Tope
/// formulas are evaluated coordinatewise against these vectors.
pub struct Interval {
    pub psh: Arc<FinPresheaf>,
    /// per (object, element): the valuation vector
    pub vals: Vec<Vec<Vec<bool>>>,
    /// coordinates per object
    pub coords: Vec<usize>,
}

/// Monotone maps `[m] -> [1]` in lexicographic order of value tuples.
fn chain_tuples(m: usize) -> Vec<Vec<bool>> {
    // 0^(m+1-j) 1^j for j = 0..=m+1, lex ascending
    (0..=(m + 1))
        .map(|ones| (0..=m).map(|i| i >= m + 1 - ones).collect())
        .collect()
}

fn delta_interval(n: usize) -> Result<Interval, ExtError> {
    let cat = delta_cat(n);
    let elems: Vec<Vec<Vec<bool>>> = (0..=n).map(chain_tuples).collect();
    let card: Vec<usize> = elems.iter().map(|e| e.len()).collect();
    let restrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            let tuple = crate::presheaf::delta_mor_values(&cat, f);
            elems[b.0]
                .iter()
                .map(|t| {
                    let moved: Vec<bool> = tuple.iter().map(|&j| t[j]).collect();
                    elems[a.0]
                        .iter()
                        .position(|u| *u == moved)
                        .expect("monotone restriction stays in the interval")
                })
                .collect()
        })
        .collect();
    let psh = FinPresheaf::new(cat, card, restrict).map_err(ExtError::Psh)?;
    Ok(Interval {
        psh,
        coords: (0..=n).map(|m| m + 1).collect(),
        vals: elems,
    })
}



/// The two-point constant interval (used over the terminal and arrow
/// bases, where every stage sees the bare chain).
fn constant_interval(cat: Arc<FinCat>) -> Result<Interval, ExtError> {
    let n = cat.n_objects();
    let card = vec![2; n];
    let restrict = cat.mors().map(|_| vec![0, 1]).collect();
    let psh = FinPresheaf::new(cat, card, restrict).map_err(ExtError::Psh)?;
    Ok(Interval {
        psh,
        vals: (0..n).map(|_| vec![vec![false], vec![true]]).collect(),
        coords: vec![1; n],
    })
}

/// The designated interval of a shipped base.
pub fn interval_for(base: BaseId) -> Result<Interval, ExtError> {
    match base {
        BaseId::Terminal | BaseId::Arrow => constant_interval(base.cat()),
        BaseId::Delta1 => delta_interval(1),
        BaseId::Delta2 => delta_interval(2),
    }
}

/// A shape inclusion interpreted over a base: the cube presheaf (a power
/// of the interval), the subpresheaves of the upper and lower topes, and
/// the inclusion between them.
pub struct SemShape {
    pub base: BaseId,
    pub cube: Cube,
    pub interval: Interval,
    pub cube_psh: Arc<FinPresheaf>,
    /// decode: per (object, element): one interval element per dimension
    pub tuples: Vec<Vec<Vec<usize>>>,
    pub upper: Tope,
    pub lower: Tope,
    pub psi: SubPresheaf,
    pub phi: SubPresheaf,
    /// the mono `phi -> psi`
    pub incl: PresheafMap,
}

impl SemShape {
    /// Index of a phi element inside psi.
    pub fn phi_into_psi(&self, o: ObjId, phi_elem: usize) -> usize {
        self.incl.apply(o, phi_elem)
    }
}

fn eval_term_at(
    interval: &Interval,
    cube: &Cube,
    tuple: &[usize],
    o: ObjId,
    term: &CubeTerm,
    coord: usize,
) -> bool {
    match term {
        CubeTerm::Zero => false,
        CubeTerm::One => true,
        CubeTerm::Var(x) => {
            let d = cube
                .dims()
                .iter()
                .position(|v| v == x)
                .expect("scoped tope variable");
            interval.vals[o.0][tuple[d]][coord]
        }
    }
}

/// Tope satisfaction at a stage element, coordinatewise on atoms.
pub fn satisfies_at(
    interval: &Interval,
    cube: &Cube,
    tope: &Tope,
    o: ObjId,
    tuple: &[usize],
) -> bool {
    match tope {
        Tope::Top => true,
        Tope::Bot => false,
        Tope::Le(a, b) => (0..interval.coords[o.0]).all(|l| {
            !eval_term_at(interval, cube, tuple, o, a, l)
                || eval_term_at(interval, cube, tuple, o, b, l)
        }),
        Tope::Eq(a, b) => (0..interval.coords[o.0]).all(|l| {
            eval_term_at(interval, cube, tuple, o, a, l)
                == eval_term_at(interval, cube, tuple, o, b, l)
        }),
        Tope::And(a, b) => {
            satisfies_at(interval, cube, a, o, tuple) && satisfies_at(interval, cube, b, o, tuple)
        }
        Tope::Or(a, b) => {
            satisfies_at(interval, cube, a, o, tuple) || satisfies_at(interval, cube, b, o, tuple)
        }
    }
}

/// Interprets a certified shape inclusion over a base category.
///
/// The point-level certificate does not by itself guarantee stagewise
/// containment on simplicial bases (a disjunction can hold at every point
/// of the chain yet fail at a higher cell), so containment is re-verified
/// here and a failure is an explicit error.
pub fn interpret_shape(base: BaseId, incl: &ShapeInclusion) -> Result<SemShape, ExtError> {
    let interval = interval_for(base)?;
    let cat = interval.psh.cat().clone();
    let n = incl.cube.len();

    // the cube: an n-fold power of the interval with lexicographic tuples
    let card: Vec<usize> = cat.objects().map(|c| interval.psh.card(c).pow(n as u32)).collect();
    let tuples: Vec<Vec<Vec<usize>>> = cat
        .objects()
        .map(|c| {
            let m = interval.psh.card(c);
            (0..card[c.0])
                .map(|mut p| {
                    let mut t = vec![0usize; n];
                    for d in (0..n).rev() {
                        t[d] = p % m;
                        p /= m;
                    }
                    t
                })
                .collect()
        })
        .collect();
    let restrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            let m = interval.psh.card(a);
            tuples[b.0]
                .iter()
                .map(|t| {
                    t.iter()
                        .fold(0usize, |acc, &e| acc * m + interval.psh.restrict(f, e))
                })
                .collect()
        })
        .collect();
    let cube_psh = FinPresheaf::new(cat.clone(), card, restrict).map_err(ExtError::Psh)?;

    let select = |tope: &Tope| -> Vec<Vec<usize>> {
        cat.objects()
            .map(|c| {
                (0..cube_psh.card(c))
                    .filter(|&p| satisfies_at(&interval, &incl.cube, tope, c, &tuples[c.0][p]))
                    .collect()
            })
            .collect()
    };
    let psi = subpresheaf(&cube_psh, select(&incl.upper)).map_err(ExtError::Psh)?;
    let phi = subpresheaf(&cube_psh, select(&incl.lower)).map_err(ExtError::Psh)?;
    // stagewise containment
    let mut incl_tables = Vec::new();
    for c in cat.objects() {
        let mut tab = Vec::new();
        for &e in &phi.elems[c.0] {
            match psi.index_of(c, e) {
                Some(i) => tab.push(i),
                None => {
                    return Err(ExtError::NotASubshape {
                        stage: cat.object_name(c).to_string(),
                        lower: incl.lower.to_string(),
                        upper: incl.upper.to_string(),
                    })
                }
            }
        }
        incl_tables.push(tab);
    }
    let incl_map =
        PresheafMap::new(phi.psh.clone(), psi.psh.clone(), incl_tables).map_err(ExtError::Psh)?;
    Ok(SemShape {
        base,
        cube: incl.cube.clone(),
        interval,
        cube_psh,
        tuples,
        upper: incl.upper.clone(),
        lower: incl.lower.clone(),
        psi,
        phi,
        incl: incl_map,
    })
}

/// The standard shape catalogue used by the stability fleet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeKind {
    /// `j = id` on the full interval
    IdentityTop,
    /// `j = id` on one endpoint
    IdentityPoint,
    /// empty lower shape inside the full interval
    BotTop,
    /// empty lower shape inside one endpoint
    BotPoint,
    /// one endpoint inside the full interval
    Endpoint,
    /// both endpoints inside the full interval
    Boundary,
    /// two dimensions: the corner inside the order shape `s <= t`
    CornerInTriangle,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 7] = [
        ShapeKind::IdentityTop,
        ShapeKind::IdentityPoint,
        ShapeKind::BotTop,
        ShapeKind::BotPoint,
        ShapeKind::Endpoint,
        ShapeKind::Boundary,
        ShapeKind::CornerInTriangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::IdentityTop => "id-top",
            ShapeKind::IdentityPoint => "id-point",
            ShapeKind::BotTop => "bot-top",
            ShapeKind::BotPoint => "bot-point",
            ShapeKind::Endpoint => "endpoint",
            ShapeKind::Boundary => "boundary",
            ShapeKind::CornerInTriangle => "corner-triangle",
        }
    }

    pub fn parse(s: &str) -> Option<ShapeKind> {
        ShapeKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_identity(self) -> bool {
        matches!(self, ShapeKind::IdentityTop | ShapeKind::IdentityPoint)
    }

    pub fn has_empty_lower(self) -> bool {
        matches!(self, ShapeKind::BotTop | ShapeKind::BotPoint)
    }

    /// The certified inclusion for this catalogue entry.
    pub fn inclusion(self) -> ShapeInclusion {
        let t = Cube::new(["t"]).unwrap();
        let st = Cube::new(["s", "t"]).unwrap();
        let mk = |cube: &Cube, lo: Tope, up: Tope| {
            crate::tope::mk_shape_inclusion(cube, lo, up).expect("catalogue entries are inclusions")
        };
        match self {
            ShapeKind::IdentityTop => mk(&t, Tope::Top, Tope::Top),
            ShapeKind::IdentityPoint => mk(&t, Tope::eq_zero("t"), Tope::eq_zero("t")),
            ShapeKind::BotTop => mk(&t, Tope::Bot, Tope::Top),
            ShapeKind::BotPoint => mk(&t, Tope::Bot, Tope::eq_zero("t")),
            ShapeKind::Endpoint => mk(&t, Tope::eq_zero("t"), Tope::Top),
            ShapeKind::Boundary => mk(&t, Tope::eq_zero("t").or(Tope::eq_one("t")), Tope::Top),
            ShapeKind::CornerInTriangle => mk(
                &st,
                Tope::eq_zero("s").and(Tope::eq_zero("t")),
                Tope::Le(CubeTerm::var("s"), CubeTerm::var("t")),
            ),
        }
    }
}
