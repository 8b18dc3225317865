//! Derives singularity data from an expression tree.
//!
//! Rational subtrees are carried exactly as factored numerator/denominator
//! pairs so that pole orders come from explicit powers rather than from
//! clustering nearly-equal numerical roots. Once a transcendental node is
//! involved the analysis falls back to a list of singular points plus a
//! completeness flag.

use num_complex::Complex64;

use super::parser::{Func, Node};
use super::poly::Poly;
use super::{Entirety, Singularity, SingularityKind};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const FACTOR_TOL: f64 = 1e-12;
const ROOT_MERGE_TOL: f64 = 1e-7;

/// `scale · Π factor_k^{mult_k}` with monic, non-constant factors.
#[derive(Clone, Debug)]
struct Factored {
    scale: Complex64,
    factors: Vec<(Poly, u32)>,
}

impl Factored {
    fn constant(c: Complex64) -> Self {
        Self { scale: c, factors: Vec::new() }
    }

    fn from_poly(p: Poly) -> Self {
        if p.degree() == 0 {
            return Self::constant(p.coeffs()[0]);
        }
        let lead = p.leading();
        Self { scale: lead, factors: vec![(p.monic(), 1)] }
    }

    fn is_zero(&self) -> bool {
        self.scale == Complex64::new(0.0, 0.0)
    }

    fn mul(&self, other: &Factored) -> Self {
        let mut out = self.clone();
        out.scale *= other.scale;
        for (p, m) in &other.factors {
            out.push(p.clone(), *m);
        }
        out
    }

    fn push(&mut self, p: Poly, m: u32) {
        if let Some(slot) = self.factors.iter_mut().find(|(q, _)| q.approx_eq(&p, FACTOR_TOL)) {
            slot.1 += m;
        } else {
            self.factors.push((p, m));
        }
    }

    fn pow(&self, k: u32) -> Self {
        Self {
            scale: self.scale.powu(k),
            factors: self.factors.iter().map(|(p, m)| (p.clone(), m * k)).collect(),
        }
    }

    fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.scale), |acc, (p, m)| acc.mul(&p.pow(*m)))
    }

    /// Least common multiple of two factor lists (scale 1).
    fn lcm(&self, other: &Factored) -> Self {
        let mut out = Factored::constant(ONE);
        for (p, m) in &self.factors {
            out.factors.push((p.clone(), *m));
        }
        for (p, m) in &other.factors {
            if let Some(slot) = out.factors.iter_mut().find(|(q, _)| q.approx_eq(p, FACTOR_TOL)) {
                slot.1 = slot.1.max(*m);
            } else {
                out.factors.push((p.clone(), *m));
            }
        }
        out
    }

    /// `self / divisor` where every factor of `divisor` divides `self`.
    fn quotient(&self, divisor: &Factored) -> Self {
        let mut out = Factored::constant(self.scale / divisor.scale);
        for (p, m) in &self.factors {
            let taken = divisor
                .factors
                .iter()
                .find(|(q, _)| q.approx_eq(p, FACTOR_TOL))
                .map_or(0, |(_, k)| *k);
            if *m > taken {
                out.factors.push((p.clone(), m - taken));
            }
        }
        out
    }

    /// Distinct roots with multiplicities.
    fn roots(&self) -> Vec<(Complex64, u32)> {
        let mut out: Vec<(Complex64, u32)> = Vec::new();
        for (p, m) in &self.factors {
            for r in p.roots() {
                add_point(&mut out, r, *m, |a, b| a + b);
            }
        }
        out
    }
}

fn add_point(list: &mut Vec<(Complex64, u32)>, z: Complex64, m: u32, combine: impl Fn(u32, u32) -> u32) {
    if let Some(slot) = list.iter_mut().find(|(w, _)| (w - z).norm() <= ROOT_MERGE_TOL * (1.0 + z.norm())) {
        slot.1 = combine(slot.1, m);
    } else {
        list.push((z, m));
    }
}

#[derive(Clone, Debug)]
struct Rational {
    num: Factored,
    den: Factored,
}

impl Rational {
    fn poles(&self) -> Vec<Singularity> {
        self.den
            .roots()
            .into_iter()
            .map(|(location, order)| Singularity { location, kind: SingularityKind::Pole { order } })
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Info {
    rational: Option<Rational>,
    singularities: Vec<Singularity>,
    entirety: Entirety,
}

impl Info {
    fn from_rational(r: Rational) -> Self {
        let singularities = r.poles();
        let entirety = if singularities.is_empty() { Entirety::Entire } else { Entirety::Meromorphic };
        Info { rational: Some(r), singularities, entirety }
    }

    fn general(singularities: Vec<Singularity>, entirety: Entirety) -> Self {
        let entirety = match entirety {
            Entirety::Meromorphic if singularities.is_empty() => Entirety::Entire,
            Entirety::Entire if !singularities.is_empty() => Entirety::Meromorphic,
            other => other,
        };
        Info { rational: None, singularities, entirety }
    }

    /// Zeros of this subexpression, when they can be enumerated.
    fn zeros(&self, node: &Node) -> Option<Vec<(Complex64, u32)>> {
        if let Some(r) = &self.rational {
            return Some(r.num.roots());
        }
        match node {
            // exp never vanishes
            Node::Call(Func::Exp, _) => Some(Vec::new()),
            _ => None,
        }
    }
}

fn worst(a: Entirety, b: Entirety) -> Entirety {
    use Entirety::*;
    match (a, b) {
        (Unknown, _) | (_, Unknown) => Unknown,
        (Meromorphic, _) | (_, Meromorphic) => Meromorphic,
        _ => Entire,
    }
}

/// Merges singularity lists; poles at a common point combine their orders
/// with `combine`, any other kind dominates a pole.
fn merge(a: &[Singularity], b: &[Singularity], combine: impl Fn(u32, u32) -> u32) -> Vec<Singularity> {
    let mut out: Vec<Singularity> = a.to_vec();
    for s in b {
        let near = out
            .iter_mut()
            .find(|t| (t.location - s.location).norm() <= ROOT_MERGE_TOL * (1.0 + s.location.norm()));
        match near {
            None => out.push(*s),
            Some(t) => {
                t.kind = match (t.kind, s.kind) {
                    (SingularityKind::Pole { order: p }, SingularityKind::Pole { order: q }) => {
                        SingularityKind::Pole { order: combine(p, q) }
                    }
                    (SingularityKind::Essential, _) | (_, SingularityKind::Essential) => SingularityKind::Essential,
                    _ => SingularityKind::BranchPoint,
                }
            }
        }
    }
    out
}

fn as_poles(points: Vec<(Complex64, u32)>) -> Vec<Singularity> {
    points
        .into_iter()
        .map(|(location, order)| Singularity { location, kind: SingularityKind::Pole { order } })
        .collect()
}

fn reciprocal(node: &Node, info: &Info) -> Info {
    if let Some(r) = &info.rational {
        if r.num.is_zero() {
            return Info::general(Vec::new(), Entirety::Unknown);
        }
        return Info::from_rational(Rational { num: r.den.clone(), den: r.num.clone() });
    }
    match info.zeros(node) {
        Some(zeros) => {
            // poles of the divisor become zeros; only its other singularities survive
            let kept: Vec<Singularity> = info
                .singularities
                .iter()
                .filter(|s| !matches!(s.kind, SingularityKind::Pole { .. }))
                .copied()
                .collect();
            let sings = merge(&kept, &as_poles(zeros), |p, q| p + q);
            Info::general(sings, info.entirety)
        }
        None => Info::general(info.singularities.clone(), Entirety::Unknown),
    }
}

fn product(a: &Info, b: &Info) -> Info {
    if let (Some(ra), Some(rb)) = (&a.rational, &b.rational) {
        return Info::from_rational(Rational { num: ra.num.mul(&rb.num), den: ra.den.mul(&rb.den) });
    }
    Info::general(merge(&a.singularities, &b.singularities, |p, q| p + q), worst(a.entirety, b.entirety))
}

fn sum(a: &Info, b: &Info, negate_b: bool) -> Info {
    if let (Some(ra), Some(rb)) = (&a.rational, &b.rational) {
        let den = ra.den.lcm(&rb.den);
        let sign = if negate_b { -ONE } else { ONE };
        let left = ra.num.mul(&den.quotient(&ra.den)).expand();
        let right = rb.num.mul(&den.quotient(&rb.den)).expand().scaled(sign);
        let num = Factored::from_poly(left.add(&right));
        return Info::from_rational(Rational { num, den });
    }
    Info::general(merge(&a.singularities, &b.singularities, u32::max), worst(a.entirety, b.entirety))
}

pub(crate) fn analyse(node: &Node) -> (Vec<Singularity>, Entirety) {
    let info = visit(node);
    (info.singularities, info.entirety)
}

fn visit(node: &Node) -> Info {
    match node {
        Node::Const(c) => Info::from_rational(Rational { num: Factored::constant(*c), den: Factored::constant(ONE) }),
        Node::Var => Info::from_rational(Rational {
            num: Factored::from_poly(Poly::identity()),
            den: Factored::constant(ONE),
        }),
        Node::Neg(a) => {
            let mut info = visit(a);
            if let Some(r) = info.rational.as_mut() {
                r.num.scale = -r.num.scale;
            }
            info
        }
        Node::Add(a, b) => sum(&visit(a), &visit(b), false),
        Node::Sub(a, b) => sum(&visit(a), &visit(b), true),
        Node::Mul(a, b) => product(&visit(a), &visit(b)),
        Node::Div(a, b) => product(&visit(a), &reciprocal(b, &visit(b))),
        Node::Pow(a, k) => {
            let base = visit(a);
            let powered = match &base.rational {
                Some(r) => Info::from_rational(Rational { num: r.num.pow(k.unsigned_abs()), den: r.den.pow(k.unsigned_abs()) }),
                None => {
                    let sings = base
                        .singularities
                        .iter()
                        .map(|s| match s.kind {
                            SingularityKind::Pole { order } => Singularity {
                                location: s.location,
                                kind: SingularityKind::Pole { order: order * k.unsigned_abs().max(1) },
                            },
                            _ => *s,
                        })
                        .collect();
                    Info::general(sings, base.entirety)
                }
            };
            if *k < 0 {
                reciprocal(a, &powered)
            } else if *k == 0 {
                Info::from_rational(Rational { num: Factored::constant(ONE), den: Factored::constant(ONE) })
            } else {
                powered
            }
        }
        Node::Call(func, a) => {
            let arg = visit(a);
            match func {
                Func::Exp | Func::Sin | Func::Cos => {
                    let sings = arg
                        .singularities
                        .iter()
                        .map(|s| match s.kind {
                            SingularityKind::BranchPoint => *s,
                            _ => Singularity { location: s.location, kind: SingularityKind::Essential },
                        })
                        .collect();
                    Info::general(sings, arg.entirety)
                }
                Func::Log | Func::Sqrt => {
                    let mut points: Vec<Singularity> = arg
                        .singularities
                        .iter()
                        .map(|s| Singularity { location: s.location, kind: SingularityKind::BranchPoint })
                        .collect();
                    if let Some(zeros) = arg.zeros(a) {
                        for (location, _) in zeros {
                            points = merge(&points, &[Singularity { location, kind: SingularityKind::BranchPoint }], u32::max);
                        }
                    }
                    // principal-branch cuts are not enumerable point sets
                    Info::general(points, Entirety::Unknown)
                }
            }
        }
    }
}
