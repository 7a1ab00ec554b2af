//! Finite categories as lookup tables, with functors, natural
//! transformations and adjunctions verified exhaustively.
//!
//! The main object is a [`Situation`]: a category C with a reflective full
//! subcategory B (`S ⊣ I`) and a coreflective full subcategory D (`J ⊣ T`).
//! Under the iso hypotheses of [`validate_instance`], `JT ⊣ IS` with the
//! hom-bijection given by [`mu`] and [`nu`].

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("identity of `{0}` is not an endo-arrow")]
    BadIdentity(String),
    #[error("missing composite {g} ∘ {f}")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} ∘ {f} has the wrong type")]
    BadComposite { g: String, f: String },
    #[error("identity law fails at `{0}`")]
    IdentityLaw(String),
    #[error("associativity fails at ({h}, {g}, {f})")]
    NotAssociative { h: String, g: String, f: String },
    #[error("functor {name}: {reason}")]
    Functor { name: String, reason: String },
    #[error("transformation {name}: {reason}")]
    NotNatural { name: String, reason: String },
    #[error("triangle identity of {name} fails at `{object}`")]
    Triangle { name: String, object: String },
    #[error("{name} is not an isomorphism at `{object}`")]
    NotIso { name: String, object: String },
    #[error("square does not commute")]
    NotCommuting,
    #[error("arrow `{0}` is not an isomorphism")]
    NotIsoArrow(String),
    #[error("{0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    /// `table[g·n + f] = g ∘ f` for composable pairs.
    table: Vec<Option<usize>>,
}

impl FinCat {
    /// `compose(g, f)` is consulted for every composable pair.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, FinCatError> {
        let n = arrows.len();
        let mut table = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                if arrows[f].tgt == arrows[g].src {
                    table[g * n + f] = compose(g, f);
                }
            }
        }
        let c = FinCat { objects, arrows, identities, table };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), FinCatError> {
        unique(&self.objects)?;
        unique(&self.arrows.iter().map(|a| a.name.clone()).collect::<Vec<_>>())?;
        let n = self.arrows.len();
        if self.arrows.iter().any(|a| a.src >= self.objects.len() || a.tgt >= self.objects.len()) {
            return Err(FinCatError::Shape("arrow endpoint out of range".into()));
        }
        if self.identities.len() != self.objects.len() {
            return Err(FinCatError::Shape("one identity per object required".into()));
        }
        for (x, &i) in self.identities.iter().enumerate() {
            if i >= n || self.arrows[i].src != x || self.arrows[i].tgt != x {
                return Err(FinCatError::BadIdentity(self.objects[x].clone()));
            }
        }
        for g in 0..n {
            for f in 0..n {
                if self.arrows[f].tgt != self.arrows[g].src {
                    continue;
                }
                let names = || (self.arrows[g].name.clone(), self.arrows[f].name.clone());
                let Some(gf) = self.table[g * n + f] else {
                    let (g, f) = names();
                    return Err(FinCatError::MissingComposite { g, f });
                };
                if gf >= n || self.arrows[gf].src != self.arrows[f].src || self.arrows[gf].tgt != self.arrows[g].tgt {
                    let (g, f) = names();
                    return Err(FinCatError::BadComposite { g, f });
                }
            }
        }
        for f in 0..n {
            let a = &self.arrows[f];
            if self.compose(f, self.identities[a.src]) != f || self.compose(self.identities[a.tgt], f) != f {
                return Err(FinCatError::IdentityLaw(a.name.clone()));
            }
        }
        for f in 0..n {
            for g in self.out_arrows(self.arrows[f].tgt) {
                for h in self.out_arrows(self.arrows[g].tgt) {
                    if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f) {
                        return Err(FinCatError::NotAssociative {
                            h: self.arrows[h].name.clone(),
                            g: self.arrows[g].name.clone(),
                            f: self.arrows[f].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.arrows[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.arrows[f].tgt
    }

    pub fn id(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn object_index(&self, name: &str) -> Result<usize, FinCatError> {
        self.objects.iter().position(|o| o == name).ok_or_else(|| FinCatError::UnknownName(name.into()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize, FinCatError> {
        self.arrows.iter().position(|a| a.name == name).ok_or_else(|| FinCatError::UnknownName(name.into()))
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        if self.arrows[f].tgt != self.arrows[g].src {
            return None;
        }
        self.table[g * self.arrows.len() + f]
    }

    /// `g ∘ f`; panics if the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!("{} ∘ {} is not composable", self.arrows[g].name, self.arrows[f].name)
        })
    }

    /// Composes right-to-left: `chain(&[h, g, f]) = h ∘ g ∘ f`.
    pub fn chain(&self, arrows: &[usize]) -> usize {
        let (&last, rest) = arrows.split_last().expect("nonempty chain");
        rest.iter().rev().fold(last, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&f| self.arrows[f].src == a && self.arrows[f].tgt == b).collect()
    }

    fn out_arrows(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&f| self.arrows[f].src == a)
    }

    /// The two-sided inverse of `f`, if any.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let a = &self.arrows[f];
        self.hom(a.tgt, a.src)
            .into_iter()
            .find(|&g| self.compose(g, f) == self.id(a.src) && self.compose(f, g) == self.id(a.tgt))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    /// The unique arrow `a → b` of a thin category.
    pub fn unique_arrow(&self, a: usize, b: usize) -> Option<usize> {
        match self.hom(a, b).as_slice() {
            [f] => Some(*f),
            _ => None,
        }
    }

    pub fn terminal() -> FinCat {
        FinCat::poset(&["*"], |_, _| true).expect("one point")
    }

    /// A poset; arrows are named `x<=y`.
    pub fn poset(labels: &[&str], leq: impl Fn(usize, usize) -> bool) -> Result<FinCat, FinCatError> {
        let objects: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for a in 0..labels.len() {
            for b in 0..labels.len() {
                if leq(a, b) {
                    index.insert((a, b), arrows.len());
                    arrows.push(Arrow { name: format!("{}<={}", labels[a], labels[b]), src: a, tgt: b });
                }
            }
        }
        let identities = (0..labels.len())
            .map(|a| index.get(&(a, a)).copied().ok_or_else(|| FinCatError::BadIdentity(labels[a].into())))
            .collect::<Result<_, _>>()?;
        let arrs = arrows.clone();
        FinCat::new(objects, arrows, identities, |g, f| index.get(&(arrs[f].src, arrs[g].tgt)).copied())
    }

    /// Labels in order, `labels[i] ≤ labels[j]` iff `i ≤ j`.
    pub fn chain_of(labels: &[&str]) -> FinCat {
        FinCat::poset(labels, |a, b| a <= b).expect("a chain is a poset")
    }

    /// `Z/n` as a one-object category; arrows `g0 … g{n−1}`.
    pub fn cyclic_group(n: usize) -> FinCat {
        let arrows = (0..n).map(|k| Arrow { name: format!("g{k}"), src: 0, tgt: 0 }).collect();
        FinCat::new(vec!["*".into()], arrows, vec![0], |g, f| Some((g + f) % n)).expect("a group is a category")
    }

    /// `A × B`; object `(x, y)` has index `x·|B₀| + y` and arrow `(f, g)` has
    /// index `f·|B₁| + g`.
    pub fn product(a: &FinCat, b: &FinCat) -> FinCat {
        let (nbo, nba) = (b.objects.len(), b.arrows.len());
        let mut objects = Vec::new();
        for x in &a.objects {
            for y in &b.objects {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut arrows = Vec::new();
        for f in &a.arrows {
            for g in &b.arrows {
                arrows.push(Arrow {
                    name: format!("({},{})", f.name, g.name),
                    src: f.src * nbo + g.src,
                    tgt: f.tgt * nbo + g.tgt,
                });
            }
        }
        let mut identities = Vec::new();
        for x in 0..a.objects.len() {
            for y in 0..nbo {
                identities.push(a.id(x) * nba + b.id(y));
            }
        }
        FinCat::new(objects, arrows, identities, |g, f| {
            let h1 = a.try_compose(g / nba, f / nba)?;
            let h2 = b.try_compose(g % nba, f % nba)?;
            Some(h1 * nba + h2)
        })
        .expect("products of categories are categories")
    }

    /// Every pair of objects joined by exactly one arrow (all arrows isos).
    pub fn codiscrete(labels: &[&str]) -> FinCat {
        FinCat::poset(labels, |_, _| true).expect("the indiscrete preorder is a poset-like table")
    }

    /// The full subcategory on `objects` (C-order preserved) and its inclusion.
    pub fn full_subcategory(&self, objects: &[usize]) -> (FinCat, FinFunctor) {
        let obj_pos: HashMap<usize, usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let kept: Vec<usize> =
            (0..self.arrows.len()).filter(|&f| obj_pos.contains_key(&self.src(f)) && obj_pos.contains_key(&self.tgt(f))).collect();
        let arr_pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let arrows = kept
            .iter()
            .map(|&f| Arrow { name: self.arrows[f].name.clone(), src: obj_pos[&self.src(f)], tgt: obj_pos[&self.tgt(f)] })
            .collect();
        let identities = objects.iter().map(|&o| arr_pos[&self.id(o)]).collect();
        let names = objects.iter().map(|&o| self.objects[o].clone()).collect();
        let sub = FinCat::new(names, arrows, identities, |g, f| arr_pos.get(&self.compose(kept[g], kept[f])).copied())
            .expect("full subcategories are closed under composition");
        (sub, FinFunctor { obj: objects.to_vec(), arr: kept })
    }
}

fn unique(names: &[String]) -> Result<(), FinCatError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(FinCatError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    id: String,
    src: String,
    tgt: String,
}

#[derive(Serialize, Deserialize)]
struct FinCatJson {
    objects: Vec<String>,
    arrows: Vec<ArrowJson>,
    identities: BTreeMap<String, String>,
    /// `[g, f, g∘f]` for every composable pair.
    compose: Vec<[String; 3]>,
}

impl Serialize for FinCat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.arrows.len();
        let name = |f: usize| self.arrows[f].name.clone();
        let mut compose = Vec::new();
        for g in 0..n {
            for f in 0..n {
                if let Some(gf) = self.try_compose(g, f) {
                    compose.push([name(g), name(f), name(gf)]);
                }
            }
        }
        FinCatJson {
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson { id: a.name.clone(), src: self.objects[a.src].clone(), tgt: self.objects[a.tgt].clone() })
                .collect(),
            identities: (0..self.objects.len()).map(|x| (self.objects[x].clone(), name(self.id(x)))).collect(),
            compose,
        }
        .serialize(s)
    }
}

impl TryFrom<FinCatJson> for FinCat {
    type Error = FinCatError;

    fn try_from(j: FinCatJson) -> Result<Self, FinCatError> {
        unique(&j.objects)?;
        let obj = |n: &str| j.objects.iter().position(|o| o == n).ok_or_else(|| FinCatError::UnknownName(n.into()));
        let arrows = j
            .arrows
            .iter()
            .map(|a| Ok(Arrow { name: a.id.clone(), src: obj(&a.src)?, tgt: obj(&a.tgt)? }))
            .collect::<Result<Vec<_>, FinCatError>>()?;
        unique(&arrows.iter().map(|a| a.name.clone()).collect::<Vec<_>>())?;
        let arr = |n: &str| arrows.iter().position(|a| a.name == n).ok_or_else(|| FinCatError::UnknownName(n.into()));
        let mut identities = vec![usize::MAX; j.objects.len()];
        for (o, a) in &j.identities {
            identities[obj(o)?] = arr(a)?;
        }
        if let Some(x) = identities.iter().position(|&i| i == usize::MAX) {
            return Err(FinCatError::BadIdentity(j.objects[x].clone()));
        }
        let mut table = HashMap::new();
        for [g, f, gf] in &j.compose {
            table.insert((arr(g)?, arr(f)?), arr(gf)?);
        }
        FinCat::new(j.objects.clone(), arrows, identities, |g, f| table.get(&(g, f)).copied())
    }
}

impl<'de> Deserialize<'de> for FinCat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FinCat::try_from(FinCatJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A functor as index maps on objects and arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
}

impl FinFunctor {
    pub fn identity(c: &FinCat) -> Self {
        FinFunctor { obj: (0..c.num_objects()).collect(), arr: (0..c.num_arrows()).collect() }
    }

    /// Constant at object `x` of `tgt`.
    pub fn constant(src: &FinCat, tgt: &FinCat, x: usize) -> Self {
        FinFunctor { obj: vec![x; src.num_objects()], arr: vec![tgt.id(x); src.num_arrows()] }
    }

    /// A functor into a thin category is determined by its object map.
    pub fn into_thin(src: &FinCat, tgt: &FinCat, obj: Vec<usize>) -> Result<Self, FinCatError> {
        let arr = (0..src.num_arrows())
            .map(|f| {
                tgt.unique_arrow(obj[src.src(f)], obj[src.tgt(f)]).ok_or_else(|| FinCatError::Functor {
                    name: "thin".into(),
                    reason: format!("no unique image for `{}`", src.arrows[f].name),
                })
            })
            .collect::<Result<_, _>>()?;
        let func = FinFunctor { obj, arr };
        func.validate("thin", src, tgt)?;
        Ok(func)
    }

    pub fn validate(&self, name: &str, src: &FinCat, tgt: &FinCat) -> Result<(), FinCatError> {
        let err = |reason: String| FinCatError::Functor { name: name.into(), reason };
        if self.obj.len() != src.num_objects() || self.arr.len() != src.num_arrows() {
            return Err(err("map sizes do not match the source".into()));
        }
        if self.obj.iter().any(|&o| o >= tgt.num_objects()) || self.arr.iter().any(|&a| a >= tgt.num_arrows()) {
            return Err(err("image out of range".into()));
        }
        for f in 0..src.num_arrows() {
            let ff = self.arr[f];
            if tgt.src(ff) != self.obj[src.src(f)] || tgt.tgt(ff) != self.obj[src.tgt(f)] {
                return Err(err(format!("`{}` is sent to an arrow of the wrong type", src.arrows[f].name)));
            }
        }
        for x in 0..src.num_objects() {
            if self.arr[src.id(x)] != tgt.id(self.obj[x]) {
                return Err(err(format!("identity of `{}` is not preserved", src.objects[x])));
            }
        }
        for g in 0..src.num_arrows() {
            for f in 0..src.num_arrows() {
                if let Some(gf) = src.try_compose(g, f) {
                    if self.arr[gf] != tgt.compose(self.arr[g], self.arr[f]) {
                        return Err(err(format!(
                            "composite {} ∘ {} is not preserved",
                            src.arrows[g].name, src.arrows[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinFunctor) -> FinFunctor {
        FinFunctor {
            obj: first.obj.iter().map(|&o| self.obj[o]).collect(),
            arr: first.arr.iter().map(|&a| self.arr[a]).collect(),
        }
    }

    /// The arrow of the source sent to `g`, for functors injective on arrows.
    pub fn preimage(&self, g: usize) -> Option<usize> {
        self.arr.iter().position(|&a| a == g)
    }
}

/// Exhaustive check that every hom-set map is a bijection.
pub fn is_fully_faithful(f: &FinFunctor, src: &FinCat, tgt: &FinCat) -> bool {
    (0..src.num_objects()).all(|a| {
        (0..src.num_objects()).all(|b| {
            let h = src.hom(a, b);
            let mut images: Vec<usize> = h.iter().map(|&x| f.arr[x]).collect();
            images.sort_unstable();
            images.dedup();
            images.len() == h.len() && images.len() == tgt.hom(f.obj[a], f.obj[b]).len()
        })
    })
}

/// One component per object of the source category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<usize>,
}

impl NatTrans {
    /// Checks `η : F ⇒ G` for functors `src → tgt`.
    pub fn validate(
        &self,
        name: &str,
        src: &FinCat,
        tgt: &FinCat,
        f: &FinFunctor,
        g: &FinFunctor,
    ) -> Result<(), FinCatError> {
        let err = |reason: String| FinCatError::NotNatural { name: name.into(), reason };
        if self.components.len() != src.num_objects() {
            return Err(err("one component per object required".into()));
        }
        for x in 0..src.num_objects() {
            let c = self.components[x];
            if c >= tgt.num_arrows() || tgt.src(c) != f.obj[x] || tgt.tgt(c) != g.obj[x] {
                return Err(err(format!("component at `{}` has the wrong type", src.objects[x])));
            }
        }
        for a in 0..src.num_arrows() {
            let (x, y) = (src.src(a), src.tgt(a));
            if tgt.compose(g.arr[a], self.components[x]) != tgt.compose(self.components[y], f.arr[a]) {
                return Err(err(format!("square at `{}` does not commute", src.arrows[a].name)));
            }
        }
        Ok(())
    }

    pub fn is_iso(&self, c: &FinCat) -> bool {
        self.components.iter().all(|&a| c.is_iso(a))
    }
}

/// `left ⊣ right` with `left : C → D`, unit `1 ⇒ right∘left`, counit `left∘right ⇒ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjunction {
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

impl Adjunction {
    pub fn validate(&self, name: &str, c: &FinCat, d: &FinCat) -> Result<(), FinCatError> {
        self.left.validate(&format!("{name}.left"), c, d)?;
        self.right.validate(&format!("{name}.right"), d, c)?;
        let rl = self.right.after(&self.left);
        let lr = self.left.after(&self.right);
        self.unit.validate(&format!("{name}.unit"), c, c, &FinFunctor::identity(c), &rl)?;
        self.counit.validate(&format!("{name}.counit"), d, d, &lr, &FinFunctor::identity(d))?;
        for x in 0..c.num_objects() {
            let lx = self.left.obj[x];
            let composite = d.compose(self.counit.components[lx], self.left.arr[self.unit.components[x]]);
            if composite != d.id(lx) {
                return Err(FinCatError::Triangle { name: name.into(), object: c.objects[x].clone() });
            }
        }
        for y in 0..d.num_objects() {
            let ry = self.right.obj[y];
            let composite = c.compose(self.right.arr[self.counit.components[y]], self.unit.components[ry]);
            if composite != c.id(ry) {
                return Err(FinCatError::Triangle { name: name.into(), object: d.objects[y].clone() });
            }
        }
        Ok(())
    }
}

/// C with a reflective full subcategory B and a coreflective full subcategory
/// D: `S ⊣ I` with unit α and counit β, `J ⊣ T` with unit δ and counit ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Situation {
    pub c: FinCat,
    pub b: FinCat,
    pub d: FinCat,
    pub i: FinFunctor,
    pub j: FinFunctor,
    pub s: FinFunctor,
    pub t: FinFunctor,
    /// `1 ⇒ IS` on C.
    pub alpha: NatTrans,
    /// `SI ⇒ 1` on B.
    pub beta: NatTrans,
    /// `1 ⇒ TJ` on D.
    pub delta: NatTrans,
    /// `JT ⇒ 1` on C.
    pub epsilon: NatTrans,
}

impl Situation {
    fn reflection(&self) -> Adjunction {
        Adjunction { left: self.s.clone(), right: self.i.clone(), unit: self.alpha.clone(), counit: self.beta.clone() }
    }

    fn coreflection(&self) -> Adjunction {
        Adjunction { left: self.j.clone(), right: self.t.clone(), unit: self.delta.clone(), counit: self.epsilon.clone() }
    }

    pub fn is_(&self) -> FinFunctor {
        self.i.after(&self.s)
    }

    pub fn jt(&self) -> FinFunctor {
        self.j.after(&self.t)
    }
}

/// All hypotheses, itemized: the axioms, both adjunctions, β and δ iso,
/// and `ISε`, `JTα` iso componentwise.
pub fn validate_instance(s: &Situation) -> Result<(), Vec<FinCatError>> {
    let mut errors = Vec::new();
    for (name, cat) in [("C", &s.c), ("B", &s.b), ("D", &s.d)] {
        if let Err(e) = cat.validate() {
            errors.push(FinCatError::Shape(format!("{name}: {e}")));
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    for (name, f, src) in [("I", &s.i, &s.b), ("J", &s.j, &s.d)] {
        match f.validate(name, src, &s.c) {
            Err(e) => errors.push(e),
            Ok(()) => {
                let mut objs = f.obj.clone();
                objs.sort_unstable();
                objs.dedup();
                if objs.len() != f.obj.len() || !is_fully_faithful(f, src, &s.c) {
                    errors.push(FinCatError::Functor { name: name.into(), reason: "not a full subcategory inclusion".into() });
                }
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    if let Err(e) = s.reflection().validate("S ⊣ I", &s.c, &s.b) {
        errors.push(e);
    }
    if let Err(e) = s.coreflection().validate("J ⊣ T", &s.d, &s.c) {
        errors.push(e);
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    for (name, nt, cat) in [("β", &s.beta, &s.b), ("δ", &s.delta, &s.d)] {
        for (x, &a) in nt.components.iter().enumerate() {
            if !cat.is_iso(a) {
                errors.push(FinCatError::NotIso { name: name.into(), object: cat.objects[x].clone() });
            }
        }
    }
    let is = s.is_();
    let jt = s.jt();
    for x in 0..s.c.num_objects() {
        if !s.c.is_iso(is.arr[s.epsilon.components[x]]) {
            errors.push(FinCatError::NotIso { name: "ISε".into(), object: s.c.objects[x].clone() });
        }
        if !s.c.is_iso(jt.arr[s.alpha.components[x]]) {
            errors.push(FinCatError::NotIso { name: "JTα".into(), object: s.c.objects[x].clone() });
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// For `f : JT c → c2`, `μf = ISf ∘ (ISε_c)⁻¹ ∘ α_c : c → IS c2`.
pub fn mu(s: &Situation, c: usize, f: usize) -> usize {
    let is = s.is_();
    let inv = s.c.inverse(is.arr[s.epsilon.components[c]]).expect("ISε is iso");
    s.c.chain(&[is.arr[f], inv, s.alpha.components[c]])
}

/// For `g : c → IS c2`, `νg = ε_{c2} ∘ (JTα_{c2})⁻¹ ∘ JTg : JT c → c2`.
pub fn nu(s: &Situation, c2: usize, g: usize) -> usize {
    let jt = s.jt();
    let inv = s.c.inverse(jt.arr[s.alpha.components[c2]]).expect("JTα is iso");
    s.c.chain(&[s.epsilon.components[c2], inv, jt.arr[g]])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub hom_pairs: usize,
    pub arrows_checked: usize,
}

/// `ν ∘ μ = id` and `μ ∘ ν = id` on every `Hom(JT c, c2) ≅ Hom(c, IS c2)`.
pub fn check_theorem(s: &Situation) -> Result<TheoremReport, String> {
    let (is, jt) = (s.is_(), s.jt());
    let cat = &s.c;
    let mut checked = 0;
    let n = cat.num_objects();
    for c in 0..n {
        for c2 in 0..n {
            let lhs = cat.hom(jt.obj[c], c2);
            let rhs = cat.hom(c, is.obj[c2]);
            if lhs.len() != rhs.len() {
                return Err(format!("|Hom(JT{0}, {1})| ≠ |Hom({0}, IS{1})|", cat.objects[c], cat.objects[c2]));
            }
            for &f in &lhs {
                let g = mu(s, c, f);
                if cat.src(g) != c || cat.tgt(g) != is.obj[c2] {
                    return Err(format!("μ({}) has the wrong type", cat.arrows[f].name));
                }
                if nu(s, c2, g) != f {
                    return Err(format!("ν(μ({})) ≠ {0}", cat.arrows[f].name));
                }
                checked += 1;
            }
            for &g in &rhs {
                if mu(s, c, nu(s, c2, g)) != g {
                    return Err(format!("μ(ν({})) ≠ {0}", cat.arrows[g].name));
                }
                checked += 1;
            }
        }
    }
    Ok(TheoremReport { hom_pairs: n * n, arrows_checked: checked })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub jti_s_bijections: usize,
    pub t_isj_bijections: usize,
    pub jti_fully_faithful: bool,
    pub isj_fully_faithful: bool,
    pub ti_sj_unit_iso: bool,
    pub ti_sj_counit_iso: bool,
}

fn check_bijection(from: &[usize], to: &[usize], map: impl Fn(usize) -> Option<usize>) -> bool {
    let mut images = Vec::new();
    for &f in from {
        match map(f) {
            Some(g) if to.contains(&g) => images.push(g),
            _ => return false,
        }
    }
    images.sort_unstable();
    images.dedup();
    images.len() == from.len() && from.len() == to.len()
}

/// `JTI ⊣ S`, `T ⊣ ISJ`, full faithfulness of `JTI` and `ISJ`, and the
/// adjoint equivalence `TI ⊣ SJ` between B and D.
pub fn check_corollaries(s: &Situation) -> Result<CorollaryReport, String> {
    let cat = &s.c;
    let jti = s.jt().after(&s.i);
    let isj = s.is_().after(&s.j);
    let mut jti_s = 0;
    for b in 0..s.b.num_objects() {
        for c in 0..cat.num_objects() {
            let from = cat.hom(jti.obj[b], c);
            let to = s.b.hom(b, s.s.obj[c]);
            if !check_bijection(&from, &to, |f| s.i.preimage(mu(s, s.i.obj[b], f))) {
                return Err(format!("Hom(JTI{}, {}) → Hom_B(-, S-) is not bijective", s.b.objects[b], cat.objects[c]));
            }
            jti_s += 1;
        }
    }
    let mut t_isj = 0;
    for c in 0..cat.num_objects() {
        for d in 0..s.d.num_objects() {
            let from = s.d.hom(s.t.obj[c], d);
            let to = cat.hom(c, isj.obj[d]);
            if !check_bijection(&from, &to, |h| Some(mu(s, c, s.j.arr[h]))) {
                return Err(format!("Hom_D(T{}, {}) → Hom(-, ISJ-) is not bijective", cat.objects[c], s.d.objects[d]));
            }
            t_isj += 1;
        }
    }
    let jti_ff = is_fully_faithful(&jti, &s.b, cat);
    let isj_ff = is_fully_faithful(&isj, &s.d, cat);
    if !jti_ff {
        return Err("JTI is not fully faithful".into());
    }
    if !isj_ff {
        return Err("ISJ is not fully faithful".into());
    }
    // TI ⊣ SJ through the bijections above
    let ti = s.t.after(&s.i);
    let sj = s.s.after(&s.j);
    let unit = (0..s.b.num_objects())
        .map(|b| {
            let x = jti.obj[b];
            s.i.preimage(mu(s, s.i.obj[b], cat.id(x))).ok_or_else(|| format!("unit at {} leaves B", s.b.objects[b]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let counit = (0..s.d.num_objects())
        .map(|d| {
            let x = isj.obj[d];
            s.j.preimage(nu(s, s.j.obj[d], cat.id(x))).ok_or_else(|| format!("counit at {} leaves D", s.d.objects[d]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let eq = Adjunction { left: ti, right: sj, unit: NatTrans { components: unit }, counit: NatTrans { components: counit } };
    eq.validate("TI ⊣ SJ", &s.b, &s.d).map_err(|e| e.to_string())?;
    let unit_iso = eq.unit.is_iso(&s.b);
    let counit_iso = eq.counit.is_iso(&s.d);
    if !unit_iso {
        return Err("unit of TI ⊣ SJ is not an isomorphism".into());
    }
    if !counit_iso {
        return Err("counit of TI ⊣ SJ is not an isomorphism".into());
    }
    Ok(CorollaryReport {
        jti_s_bijections: jti_s,
        t_isj_bijections: t_isj,
        jti_fully_faithful: jti_ff,
        isj_fully_faithful: isj_ff,
        ti_sj_unit_iso: unit_iso,
        ti_sj_counit_iso: counit_iso,
    })
}

/// `f : A → B`, `g : B → D`, `h : A → C`, `k : C → D` with `g∘f = k∘h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Square {
    pub f: usize,
    pub g: usize,
    pub h: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertedSquare {
    /// `k⁻¹∘g = h∘f⁻¹ : B → C`.
    pub half: usize,
    /// With g and h iso as well: `f⁻¹∘g⁻¹ = h⁻¹∘k⁻¹ : D → A`.
    pub full: Option<usize>,
}

pub fn invert_square(c: &FinCat, sq: Square) -> Result<InvertedSquare, FinCatError> {
    let Square { f, g, h, k } = sq;
    let typed = c.tgt(f) == c.src(g) && c.tgt(h) == c.src(k) && c.src(f) == c.src(h) && c.tgt(g) == c.tgt(k);
    if !typed || c.compose(g, f) != c.compose(k, h) {
        return Err(FinCatError::NotCommuting);
    }
    let name = |x: usize| c.arrows()[x].name.clone();
    let fi = c.inverse(f).ok_or_else(|| FinCatError::NotIsoArrow(name(f)))?;
    let ki = c.inverse(k).ok_or_else(|| FinCatError::NotIsoArrow(name(k)))?;
    let left = c.compose(ki, g);
    if left != c.compose(h, fi) {
        return Err(FinCatError::NotCommuting);
    }
    let full = match (c.inverse(g), c.inverse(h)) {
        (Some(gi), Some(hi)) => {
            let x = c.compose(fi, gi);
            if x != c.compose(hi, ki) {
                return Err(FinCatError::NotCommuting);
            }
            Some(x)
        }
        _ => None,
    };
    Ok(InvertedSquare { half: left, full })
}

/// `L ⊣ F ⊣ R` with `F : A → B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoAdjunction {
    pub a: FinCat,
    pub b: FinCat,
    /// `L ⊣ F`: from B to A.
    pub lf: Adjunction,
    /// `F ⊣ R`: from A to B.
    pub fr: Adjunction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoAdjReport {
    pub left_fully_faithful: bool,
    pub right_fully_faithful: bool,
    pub biconditional: bool,
}

pub fn check_2adj(t: &TwoAdjunction) -> Result<TwoAdjReport, FinCatError> {
    t.lf.validate("L ⊣ F", &t.b, &t.a)?;
    t.fr.validate("F ⊣ R", &t.a, &t.b)?;
    if t.lf.right != t.fr.left {
        return Err(FinCatError::Shape("the two adjunctions do not share F".into()));
    }
    let l = is_fully_faithful(&t.lf.left, &t.b, &t.a);
    let r = is_fully_faithful(&t.fr.right, &t.b, &t.a);
    Ok(TwoAdjReport { left_fully_faithful: l, right_fully_faithful: r, biconditional: l == r })
}

fn thin_trans(src: &FinCat, tgt: &FinCat, f: &FinFunctor, g: &FinFunctor) -> NatTrans {
    NatTrans {
        components: (0..src.num_objects())
            .map(|x| tgt.unique_arrow(f.obj[x], g.obj[x]).expect("thin component exists"))
            .collect(),
    }
}

/// `Id ⊣ Id ⊣ Id` on the 2-chain.
pub fn two_adj_identity() -> TwoAdjunction {
    let a = FinCat::chain_of(&["0", "1"]);
    let id = FinFunctor::identity(&a);
    let ids = NatTrans { components: (0..a.num_objects()).map(|x| a.id(x)).collect() };
    let adj = Adjunction { left: id.clone(), right: id, unit: ids.clone(), counit: ids };
    TwoAdjunction { a: a.clone(), b: a, lf: adj.clone(), fr: adj }
}

/// `∨ ⊣ Δ ⊣ ∧` for `Δ : 2 → 2 × 2`.
pub fn two_adj_diagonal() -> TwoAdjunction {
    let a = FinCat::chain_of(&["0", "1"]);
    let b = FinCat::product(&a, &a);
    let diag = FinFunctor::into_thin(&a, &b, vec![0, 3]).expect("diagonal");
    let join = FinFunctor::into_thin(&b, &a, (0..4).map(|o| (o / 2).max(o % 2)).collect()).expect("join");
    let meet = FinFunctor::into_thin(&b, &a, (0..4).map(|o| (o / 2).min(o % 2)).collect()).expect("meet");
    let fl = diag.after(&join);
    let lf = join.after(&diag);
    let rf = meet.after(&diag);
    let fr = diag.after(&meet);
    let (ida, idb) = (FinFunctor::identity(&a), FinFunctor::identity(&b));
    let lf_adj = Adjunction {
        left: join.clone(),
        right: diag.clone(),
        unit: thin_trans(&b, &b, &idb, &fl),
        counit: thin_trans(&a, &a, &lf, &ida),
    };
    let fr_adj = Adjunction {
        left: diag,
        right: meet,
        unit: thin_trans(&a, &a, &ida, &rf),
        counit: thin_trans(&b, &b, &fr, &idb),
    };
    TwoAdjunction { a, b, lf: lf_adj, fr: fr_adj }
}

/// Everything the identity on the one-arrow category.
pub fn trivial_situation() -> Situation {
    let c = FinCat::terminal();
    let id = FinFunctor::identity(&c);
    let nt = NatTrans { components: vec![c.id(0)] };
    Situation {
        b: c.clone(),
        d: c.clone(),
        i: id.clone(),
        j: id.clone(),
        s: id.clone(),
        t: id,
        alpha: nt.clone(),
        beta: nt.clone(),
        delta: nt.clone(),
        epsilon: nt,
        c,
    }
}

/// Builds the situation where B is the full subcategory on `top` and D the
/// one on `bottom`, with `S` and `T` given on objects and on arrows.
fn situation_from(
    c: FinCat,
    top: usize,
    bottom: usize,
    s_arr: impl Fn(usize) -> usize,
    t_arr: impl Fn(usize) -> usize,
    alpha: impl Fn(usize) -> usize,
    epsilon: impl Fn(usize) -> usize,
) -> Situation {
    let (b, i) = c.full_subcategory(&[top]);
    let (d, j) = c.full_subcategory(&[bottom]);
    let s = FinFunctor {
        obj: vec![0; c.num_objects()],
        arr: (0..c.num_arrows()).map(|f| i.preimage(s_arr(f)).expect("S lands in B")).collect(),
    };
    let t = FinFunctor {
        obj: vec![0; c.num_objects()],
        arr: (0..c.num_arrows()).map(|f| j.preimage(t_arr(f)).expect("T lands in D")).collect(),
    };
    let alpha = NatTrans { components: (0..c.num_objects()).map(alpha).collect() };
    let epsilon = NatTrans { components: (0..c.num_objects()).map(epsilon).collect() };
    let beta = NatTrans { components: vec![b.id(0)] };
    let delta = NatTrans { components: vec![d.id(0)] };
    Situation { c, b, d, i, j, s, t, alpha, beta, delta, epsilon }
}

/// The chain `0 ≤ 1` with B = {1} and D = {0}.
pub fn poset_situation() -> Situation {
    let c = FinCat::chain_of(&["0", "1"]);
    let (c0, c1) = (c.id(0), c.id(1));
    let up = c.unique_arrow(0, 1).expect("0 ≤ 1");
    situation_from(c, 1, 0, |_| c1, |_| c0, |x| if x == 0 { up } else { c1 }, |x| if x == 0 { c0 } else { up })
}

/// `(s ≤ m ≤ w) × Z/2`: 3 objects, 12 arrows, every hom-set of size 2 or 0.
/// B is the full subcategory on w, D the one on s; S and T keep the group
/// component of an arrow.
pub fn nonthin_situation() -> Situation {
    let chain = FinCat::chain_of(&["s", "m", "w"]);
    let group = FinCat::cyclic_group(2);
    let c = FinCat::product(&chain, &group);
    let ng = group.num_arrows();
    let (top, bottom) = (2, 0);
    let lift = |p: usize, g: usize| p * ng + g;
    let id_w = chain.id(2);
    let id_s = chain.id(0);
    let to_w = |x: usize| chain.unique_arrow(x, 2).expect("x ≤ w");
    let from_s = |x: usize| chain.unique_arrow(0, x).expect("s ≤ x");
    situation_from(
        c,
        top,
        bottom,
        |f| lift(id_w, f % ng),
        |f| lift(id_s, f % ng),
        |x| lift(to_w(x), 0),
        |x| lift(from_s(x), 0),
    )
}

#[derive(Serialize, Deserialize)]
struct FunctorJson {
    objects: BTreeMap<String, String>,
    arrows: BTreeMap<String, String>,
}

fn functor_json(f: &FinFunctor, src: &FinCat, tgt: &FinCat) -> FunctorJson {
    FunctorJson {
        objects: f.obj.iter().enumerate().map(|(x, &y)| (src.objects[x].clone(), tgt.objects[y].clone())).collect(),
        arrows: f.arr.iter().enumerate().map(|(x, &y)| (src.arrows[x].name.clone(), tgt.arrows[y].name.clone())).collect(),
    }
}

fn functor_from_json(j: &FunctorJson, name: &str, src: &FinCat, tgt: &FinCat) -> Result<FinFunctor, FinCatError> {
    let missing = |what: &str| FinCatError::Functor { name: name.into(), reason: format!("no image for `{what}`") };
    let obj = src
        .objects
        .iter()
        .map(|o| tgt.object_index(j.objects.get(o).ok_or_else(|| missing(o))?))
        .collect::<Result<_, _>>()?;
    let arr = src
        .arrows
        .iter()
        .map(|a| tgt.arrow_index(j.arrows.get(&a.name).ok_or_else(|| missing(&a.name))?))
        .collect::<Result<_, _>>()?;
    Ok(FinFunctor { obj, arr })
}

fn trans_json(t: &NatTrans, src: &FinCat, tgt: &FinCat) -> BTreeMap<String, String> {
    t.components.iter().enumerate().map(|(x, &a)| (src.objects[x].clone(), tgt.arrows[a].name.clone())).collect()
}

fn trans_from_json(j: &BTreeMap<String, String>, name: &str, src: &FinCat, tgt: &FinCat) -> Result<NatTrans, FinCatError> {
    let components = src
        .objects
        .iter()
        .map(|o| {
            let a = j.get(o).ok_or_else(|| FinCatError::NotNatural { name: name.into(), reason: format!("no component at `{o}`") })?;
            tgt.arrow_index(a)
        })
        .collect::<Result<_, _>>()?;
    Ok(NatTrans { components })
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct SituationJson {
    C: FinCat,
    B: FinCat,
    D: FinCat,
    I: FunctorJson,
    J: FunctorJson,
    S: FunctorJson,
    T: FunctorJson,
    alpha: BTreeMap<String, String>,
    beta: BTreeMap<String, String>,
    delta: BTreeMap<String, String>,
    epsilon: BTreeMap<String, String>,
}

impl Serialize for Situation {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        SituationJson {
            I: functor_json(&self.i, &self.b, &self.c),
            J: functor_json(&self.j, &self.d, &self.c),
            S: functor_json(&self.s, &self.c, &self.b),
            T: functor_json(&self.t, &self.c, &self.d),
            alpha: trans_json(&self.alpha, &self.c, &self.c),
            beta: trans_json(&self.beta, &self.b, &self.b),
            delta: trans_json(&self.delta, &self.d, &self.d),
            epsilon: trans_json(&self.epsilon, &self.c, &self.c),
            C: self.c.clone(),
            B: self.b.clone(),
            D: self.d.clone(),
        }
        .serialize(ser)
    }
}

impl TryFrom<SituationJson> for Situation {
    type Error = FinCatError;

    fn try_from(j: SituationJson) -> Result<Self, FinCatError> {
        Ok(Situation {
            i: functor_from_json(&j.I, "I", &j.B, &j.C)?,
            j: functor_from_json(&j.J, "J", &j.D, &j.C)?,
            s: functor_from_json(&j.S, "S", &j.C, &j.B)?,
            t: functor_from_json(&j.T, "T", &j.C, &j.D)?,
            alpha: trans_from_json(&j.alpha, "α", &j.C, &j.C)?,
            beta: trans_from_json(&j.beta, "β", &j.B, &j.B)?,
            delta: trans_from_json(&j.delta, "δ", &j.D, &j.D)?,
            epsilon: trans_from_json(&j.epsilon, "ε", &j.C, &j.C)?,
            c: j.C,
            b: j.B,
            d: j.D,
        })
    }
}

impl<'de> Deserialize<'de> for Situation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Situation::try_from(SituationJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// The shipped instance files, by name.
pub const CANNED: [(&str, &str); 3] = [
    ("trivial", include_str!("../data/trivial.json")),
    ("poset", include_str!("../data/poset.json")),
    ("nonthin", include_str!("../data/nonthin.json")),
];

pub fn canned_situation(name: &str) -> Option<Situation> {
    match name {
        "trivial" => Some(trivial_situation()),
        "poset" => Some(poset_situation()),
        "nonthin" => Some(nonthin_situation()),
        _ => None,
    }
}
