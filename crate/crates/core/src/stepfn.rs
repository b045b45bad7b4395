//! Step functions on `U*` stored as digit tries, and the translate-count
//! function η of a set.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cylinder::Cylinder;
use crate::group::{Point, Prime};
use crate::set::CylinderSet;
use crate::stream::{Enumeration, PieceStream, StreamOverlap};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node<T> {
    Leaf(T),
    Split(Vec<Node<T>>),
}

impl<T: Clone + PartialEq> Node<T> {
    fn split(&mut self, p: usize) -> &mut Vec<Node<T>> {
        if let Node::Leaf(v) = self {
            *self = Node::Split(vec![Node::Leaf(v.clone()); p]);
        }
        match self {
            Node::Split(children) => children,
            Node::Leaf(_) => unreachable!(),
        }
    }

    fn children_or_repeat(&self, p: usize) -> Vec<Node<T>> {
        match self {
            Node::Leaf(v) => vec![Node::Leaf(v.clone()); p],
            Node::Split(children) => children.clone(),
        }
    }

    fn map_leaves(&mut self, f: &mut impl FnMut(&mut T)) {
        match self {
            Node::Leaf(v) => f(v),
            Node::Split(children) => children.iter_mut().for_each(|c| c.map_leaves(f)),
        }
    }

    fn normalize(&mut self) {
        if let Node::Split(children) = self {
            children.iter_mut().for_each(Node::normalize);
            if let Node::Leaf(first) = &children[0] {
                let first = first.clone();
                if children
                    .iter()
                    .all(|c| matches!(c, Node::Leaf(v) if *v == first))
                {
                    *self = Node::Leaf(first);
                }
            }
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Split(children) => 1 + children.iter().map(Node::depth).max().unwrap_or(0),
        }
    }
}

fn combine<T: Clone + PartialEq, U: Clone + PartialEq, V: Clone + PartialEq>(
    a: &Node<T>,
    b: &Node<U>,
    p: usize,
    op: &impl Fn(&T, &U) -> V,
) -> Node<V> {
    match (a, b) {
        (Node::Leaf(x), Node::Leaf(y)) => Node::Leaf(op(x, y)),
        _ => {
            let ca = a.children_or_repeat(p);
            let cb = b.children_or_repeat(p);
            Node::Split(
                ca.iter()
                    .zip(&cb)
                    .map(|(x, y)| combine(x, y, p, op))
                    .collect(),
            )
        }
    }
}

/// A function on `U*` constant on the cells of a finite partition into
/// cylinders. Always stored in coarsest form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction<T> {
    prime: Prime,
    root: Node<T>,
}

impl<T: Clone + PartialEq> StepFunction<T> {
    pub fn constant(prime: Prime, value: T) -> Self {
        StepFunction {
            prime,
            root: Node::Leaf(value),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Applies `f` to the values on `cell`, which must lie in `U*`.
    pub fn update(&mut self, cell: &Cylinder, mut f: impl FnMut(&mut T)) {
        assert!(cell.resolution() >= 0, "cell must lie in U*");
        assert!(cell.anchor().in_unit(), "cell must lie in U*");
        let p = self.prime.get() as usize;
        let mut node = &mut self.root;
        for j in 1..=cell.resolution() {
            let d = cell.anchor().digit(j) as usize;
            node = &mut node.split(p)[d];
        }
        node.map_leaves(&mut f);
        self.root.normalize();
    }

    pub fn value_at(&self, omega: &Point) -> &T {
        let mut node = &self.root;
        let mut j = 1;
        loop {
            match node {
                Node::Leaf(v) => return v,
                Node::Split(children) => {
                    node = &children[omega.digit(j) as usize];
                    j += 1;
                }
            }
        }
    }

    /// The finest resolution needed to describe the function.
    pub fn resolution(&self) -> i64 {
        self.root.depth() as i64
    }

    /// `ω ↦ f(ω ⊕ 0.σ)`.
    pub fn translate_first_digit(&self, sigma: u32) -> Self {
        let p = self.prime.get() as usize;
        let root = match &self.root {
            Node::Leaf(_) => self.root.clone(),
            Node::Split(children) => Node::Split(
                (0..p)
                    .map(|d| children[(d + sigma as usize) % p].clone())
                    .collect(),
            ),
        };
        StepFunction {
            prime: self.prime,
            root,
        }
    }

    /// `ω ↦ f(I(ω)) = f(ρ(Bω))`.
    pub fn compose_i(&self) -> Self {
        let p = self.prime.get() as usize;
        let mut root = Node::Split(vec![self.root.clone(); p]);
        root.normalize();
        StepFunction {
            prime: self.prime,
            root,
        }
    }

    pub fn zip_with<U: Clone + PartialEq, V: Clone + PartialEq>(
        &self,
        other: &StepFunction<U>,
        op: impl Fn(&T, &U) -> V,
    ) -> StepFunction<V> {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        let mut root = combine(&self.root, &other.root, self.prime.get() as usize, &op);
        root.normalize();
        StepFunction {
            prime: self.prime,
            root,
        }
    }

    pub fn map<V: Clone + PartialEq>(&self, op: impl Fn(&T) -> V) -> StepFunction<V> {
        self.zip_with(&StepFunction::constant(self.prime, ()), |a, _| op(a))
    }

    /// Maximal cells with their values, in λ* order.
    pub fn cells(&self) -> Vec<(Cylinder, T)> {
        let mut out = Vec::new();
        let p = self.prime;
        fn walk<T: Clone>(
            node: &Node<T>,
            p: Prime,
            anchor: Point,
            res: i64,
            out: &mut Vec<(Cylinder, T)>,
        ) {
            match node {
                Node::Leaf(v) => out.push((Cylinder::around(&anchor, res), v.clone())),
                Node::Split(children) => {
                    for (d, child) in children.iter().enumerate() {
                        let next = anchor.add_unchecked(&Point::single(p, res + 1, d as u32));
                        walk(child, p, next, res + 1, out);
                    }
                }
            }
        }
        walk(&self.root, p, Point::zero(p), 0, &mut out);
        out
    }

    /// The set where `pred` holds.
    pub fn support(&self, pred: impl Fn(&T) -> bool) -> CylinderSet {
        CylinderSet::from_cylinders(
            self.prime,
            self.cells()
                .into_iter()
                .filter(|(_, v)| pred(v))
                .map(|(c, _)| c),
        )
        .expect("same prime")
    }
}

impl StepFunction<i64> {
    pub fn integral(&self) -> BigRational {
        self.cells()
            .iter()
            .map(|(c, v)| c.measure() * BigRational::from_integer(BigInt::from(*v)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn abs_integral(&self) -> BigRational {
        self.map(|v| v.abs()).integral()
    }

    pub fn min(&self) -> i64 {
        self.cells().iter().map(|(_, v)| *v).min().expect("nonempty")
    }

    pub fn max(&self) -> i64 {
        self.cells().iter().map(|(_, v)| *v).max().expect("nonempty")
    }
}

/// `η(ω) = Σ_{h ∈ H⊥} 1_S(ω ⊕ h)` on `U*`, computed from the ρ-images of a
/// set's cylinders. For streams only an enumerated prefix is folded and
/// `tail_uncertainty` is the measure left out, which is also `∫ (η - values)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaFunction {
    pub values: StepFunction<i64>,
    pub tail_uncertainty: BigRational,
}

impl EtaFunction {
    pub fn of_set(set: &CylinderSet) -> Self {
        EtaFunction {
            values: fold(set.prime(), set.iter()),
            tail_uncertainty: BigRational::zero(),
        }
    }

    pub fn of_enumeration(prime: Prime, e: &Enumeration) -> Self {
        EtaFunction {
            values: fold(prime, e.cylinders().map(|(_, c)| c)),
            tail_uncertainty: e.tail_bound.clone(),
        }
    }

    pub fn of_stream(s: &PieceStream, depth: u32) -> Result<Self, StreamOverlap> {
        Ok(EtaFunction::of_enumeration(s.prime(), &s.enumerate(depth)?))
    }

    pub fn is_exact(&self) -> bool {
        self.tail_uncertainty.is_zero()
    }

    /// Dense values on the `p^K` cells of resolution `K`, in index order.
    pub fn cell_values(&self, k: i64) -> Vec<i64> {
        let p = self.values.prime();
        let n = p.pow_u64(k as u32);
        (0..n)
            .map(|s| {
                let c = Cylinder::from_index(p, &s.into(), k);
                *self.values.value_at(c.anchor())
            })
            .collect()
    }
}

fn fold<'a>(prime: Prime, cylinders: impl Iterator<Item = &'a Cylinder>) -> StepFunction<i64> {
    let mut f = StepFunction::constant(prime, 0i64);
    for c in cylinders {
        let (image, mult) = c.rho_image();
        f.update(&image, |v| *v += mult as i64);
    }
    f
}
