//! Finite ternary-tree automorphisms as portraits.
//!
//! A depth-n portrait stores one permutation of {0,1,2} per internal node
//! (levels 0..n-1); the automorphism sends y·s to σ(y)·π_y(s). Signs, the
//! Q/Q̃ membership tests, the H-variant tests, signed automorphisms with an
//! abstract ±1 character, and the self-certifying relabeling algorithm all
//! live here.
//!
//! Key fact used throughout: sgn_m(σ, y) is the product of the local
//! permutation signs over the subtree of y at relative depths 0..m-1, so
//! P(y) := sgn_ℓ(σ,y)·sgn_{ℓ-1}(σ,y) telescopes to the product over relative
//! depth exactly ℓ-1.

use std::collections::HashMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// All six permutations of {0,1,2}, identity first.
pub const S3: [[u8; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn perm_sign(p: &[u8; 3]) -> i8 {
    let mut inv = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn perm_compose(outer: &[u8; 3], inner: &[u8; 3]) -> [u8; 3] {
    [
        outer[inner[0] as usize],
        outer[inner[1] as usize],
        outer[inner[2] as usize],
    ]
}

fn perm_invert(p: &[u8; 3]) -> [u8; 3] {
    let mut q = [0u8; 3];
    for s in 0..3u8 {
        q[p[s as usize] as usize] = s;
    }
    q
}

pub const IDENTITY_PERM: [u8; 3] = [0, 1, 2];
pub const SWAP01: [u8; 3] = [1, 0, 2];
pub const SWAP02: [u8; 3] = [2, 1, 0];
pub const SWAP12: [u8; 3] = [0, 2, 1];
pub const CYCLE012: [u8; 3] = [1, 2, 0];

/// A node address: a word over {0,1,2}. The empty word is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Vec<u8>);

impl Label {
    pub fn root() -> Self {
        Label(vec![])
    }

    pub fn new(word: Vec<u8>) -> Result<Self> {
        if word.iter().any(|&s| s > 2) {
            return Err(Error::BadLabel(format!("{word:?}")));
        }
        Ok(Label(word))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut word = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => word.push(0),
                '1' => word.push(1),
                '2' => word.push(2),
                _ => return Err(Error::BadLabel(s.to_string())),
            }
        }
        Ok(Label(word))
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn child(&self, s: u8) -> Label {
        let mut w = self.0.clone();
        w.push(s);
        Label(w)
    }

    pub fn parent(&self) -> Option<Label> {
        if self.0.is_empty() {
            None
        } else {
            Some(Label(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn is_prefix_of(&self, other: &Label) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Concatenation self·suffix.
    pub fn join(&self, suffix: &Label) -> Label {
        let mut w = self.0.clone();
        w.extend_from_slice(&suffix.0);
        Label(w)
    }

    /// All 3^m words of length m, lexicographic.
    pub fn all_at_level(m: usize) -> Vec<Label> {
        let mut out = vec![Label::root()];
        for _ in 0..m {
            let mut next = Vec::with_capacity(out.len() * 3);
            for w in &out {
                for s in 0..3 {
                    next.push(w.child(s));
                }
            }
            out = next;
        }
        out
    }

    fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &s| acc * 3 + s as usize)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "()")
        } else {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        }
    }
}

/// Smallest j >= 0 such that a and b share their length-(level-j) prefix.
/// Both labels must sit at the same level.
pub fn tree_distance(a: &Label, b: &Label) -> Result<usize> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch(a.level(), b.level()));
    }
    let n = a.level();
    let mut common = 0;
    while common < n && a.0[common] == b.0[common] {
        common += 1;
    }
    Ok(n - common)
}

/// Automorphism of the depth-n ternary tree, as one local permutation per
/// internal node. `locals[k]` holds the 3^k level-k nodes in lexicographic
/// order of their labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePortrait {
    depth: usize,
    locals: Vec<Vec<[u8; 3]>>,
}

impl TreePortrait {
    pub fn identity(depth: usize) -> Self {
        assert!(depth >= 1, "portraits have depth >= 1");
        let locals = (0..depth)
            .map(|k| vec![IDENTITY_PERM; 3usize.pow(k as u32)])
            .collect();
        TreePortrait { depth, locals }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn local(&self, node: &Label) -> [u8; 3] {
        self.locals[node.level()][node.index()]
    }

    pub fn set_local(&mut self, node: &Label, perm: [u8; 3]) {
        self.locals[node.level()][node.index()] = perm;
    }

    /// Builds a portrait from an explicit assignment of locals.
    pub fn from_locals(depth: usize, assignments: &[(Label, [u8; 3])]) -> Result<Self> {
        let mut p = TreePortrait::identity(depth);
        for (node, perm) in assignments {
            if node.level() >= depth {
                return Err(Error::OutOfTree {
                    level: node.level(),
                    offset: node.index(),
                    depth,
                });
            }
            p.set_local(node, *perm);
        }
        Ok(p)
    }

    /// Image of a node at any level <= depth.
    pub fn apply(&self, y: &Label) -> Label {
        debug_assert!(y.level() <= self.depth);
        let mut image = Vec::with_capacity(y.level());
        let mut src = Label::root();
        for &s in y.symbols() {
            let perm = self.local(&src);
            image.push(perm[s as usize]);
            src = src.child(s);
        }
        Label(image)
    }

    /// (self ∘ other)(y) = self(other(y)).
    pub fn compose(&self, other: &TreePortrait) -> TreePortrait {
        assert_eq!(self.depth, other.depth, "compose requires equal depths");
        let mut out = TreePortrait::identity(self.depth);
        for k in 0..self.depth {
            for node in Label::all_at_level(k) {
                let image = other.apply(&node);
                let perm = perm_compose(&self.local(&image), &other.local(&node));
                out.set_local(&node, perm);
            }
        }
        out
    }

    pub fn inverse(&self) -> TreePortrait {
        let mut out = TreePortrait::identity(self.depth);
        for k in 0..self.depth {
            for node in Label::all_at_level(k) {
                let image = self.apply(&node);
                out.set_local(&image, perm_invert(&self.local(&node)));
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.locals
            .iter()
            .flatten()
            .all(|p| *p == IDENTITY_PERM)
    }

    /// Restriction to the first m levels.
    pub fn restrict(&self, m: usize) -> TreePortrait {
        assert!(m >= 1 && m <= self.depth);
        TreePortrait {
            depth: m,
            locals: self.locals[..m].to_vec(),
        }
    }

    /// Extension to a deeper tree by identity locals.
    pub fn lift(&self, depth: usize) -> TreePortrait {
        assert!(depth >= self.depth);
        let mut locals = self.locals.clone();
        for k in self.depth..depth {
            locals.push(vec![IDENTITY_PERM; 3usize.pow(k as u32)]);
        }
        TreePortrait { depth, locals }
    }

    /// The induced automorphism of the subtree rooted at a fixed node y.
    /// Panics unless self(y) = y.
    pub fn subtree_at(&self, y: &Label) -> TreePortrait {
        assert_eq!(&self.apply(y), y, "subtree restriction needs a fixed node");
        let m = self.depth - y.level();
        let mut out = TreePortrait::identity(m);
        for k in 0..m {
            for rel in Label::all_at_level(k) {
                out.set_local(&rel, self.local(&y.join(&rel)));
            }
        }
        out
    }

    /// Fixes every node at levels <= m (all locals at levels < m identity).
    pub fn fixes_levels_through(&self, m: usize) -> bool {
        self.locals[..m.min(self.depth)]
            .iter()
            .flatten()
            .all(|p| *p == IDENTITY_PERM)
    }

    /// JSON serialization: a map from node words to 3-character image
    /// strings, e.g. {"": "102", "0": "012", ...}.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for k in 0..self.depth {
            for node in Label::all_at_level(k) {
                let perm = self.local(&node);
                let word: String = node.symbols().iter().map(|s| char::from(b'0' + s)).collect();
                let image: String = perm.iter().map(|s| char::from(b'0' + s)).collect();
                map.insert(word, Value::String(image));
            }
        }
        Value::Object(map)
    }

    /// Reads the JSON map form; missing nodes default to the identity
    /// permutation. The depth must cover every listed node.
    pub fn from_json(depth: usize, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadPortrait("expected an object".into()))?;
        let mut p = TreePortrait::identity(depth);
        for (word, image) in obj {
            let node = Label::parse(word)?;
            if node.level() >= depth {
                return Err(Error::BadPortrait(format!(
                    "node {word:?} too deep for depth {depth}"
                )));
            }
            let s = image
                .as_str()
                .ok_or_else(|| Error::BadPortrait(format!("image for {word:?} not a string")))?;
            if s.len() != 3 {
                return Err(Error::BadPortrait(format!("image {s:?} must have 3 symbols")));
            }
            let mut perm = [0u8; 3];
            let mut seen = [false; 3];
            for (i, ch) in s.chars().enumerate() {
                let d = ch
                    .to_digit(10)
                    .filter(|&d| d < 3)
                    .ok_or_else(|| Error::BadPortrait(format!("bad symbol in {s:?}")))? as u8;
                perm[i] = d;
                seen[d as usize] = true;
            }
            if seen != [true; 3] {
                return Err(Error::BadPortrait(format!("{s:?} is not a permutation")));
            }
            p.set_local(&node, perm);
        }
        Ok(p)
    }
}

// ---------------------------------------------------------------------------
// Signs
// ---------------------------------------------------------------------------

/// sgn_m(σ, y): the sign of the permutation σ induces on the 3^m words above
/// y, equal to the product of the local signs over the subtree of y at
/// relative depths 0..m-1. Requires m >= 1 and level(y) + m <= depth.
pub fn sgn(sigma: &TreePortrait, y: &Label, m: usize) -> Result<i8> {
    if m == 0 {
        return Err(Error::BadSignDepth);
    }
    if y.level() + m > sigma.depth() {
        return Err(Error::OutOfTree {
            level: y.level(),
            offset: m,
            depth: sigma.depth(),
        });
    }
    let mut sign = 1i8;
    let mut frontier = vec![y.clone()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for node in frontier {
            sign *= perm_sign(&sigma.local(&node));
            for s in 0..3 {
                next.push(node.child(s));
            }
        }
        frontier = next;
    }
    Ok(sign)
}

/// P(y) = sgn_ℓ(σ,y) · sgn_{ℓ-1}(σ,y); telescopes to the product of local
/// signs at relative depth exactly ℓ-1.
pub fn sign_pair(sigma: &TreePortrait, y: &Label, ell: usize) -> Result<i8> {
    Ok(sgn(sigma, y, ell)? * sgn(sigma, y, ell - 1)?)
}

/// Classification against the sign-constrained groups at a given ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QClass {
    InQ,
    InQTildeOnly,
    Outside,
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QClass::InQ => write!(f, "IN_Q"),
            QClass::InQTildeOnly => write!(f, "IN_QTILDE_ONLY"),
            QClass::Outside => write!(f, "OUTSIDE"),
        }
    }
}

/// Membership for the finite quotients: with n = depth and n >= ℓ, P(y) must
/// be +1 at every node of levels 0..n-ℓ for Q, and constant (necessarily -1)
/// for Q̃ \ Q. For n < ℓ there is no constraint.
pub fn q_membership(sigma: &TreePortrait, ell: usize) -> Result<QClass> {
    if ell < 2 {
        return Err(Error::BadEll);
    }
    let n = sigma.depth();
    if n < ell {
        return Ok(QClass::InQ);
    }
    let mut all_plus = true;
    let mut all_minus = true;
    for level in 0..=(n - ell) {
        for y in Label::all_at_level(level) {
            match sign_pair(sigma, &y, ell)? {
                1 => all_minus = false,
                _ => all_plus = false,
            }
            if !all_plus && !all_minus {
                return Ok(QClass::Outside);
            }
        }
    }
    Ok(if all_plus {
        QClass::InQ
    } else {
        QClass::InQTildeOnly
    })
}

/// One of the four H-variants: a sign pattern over the three level-1 nodes,
/// modulo the global flip. `canonical` normalizes to a representative whose
/// first entry is +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HVariant(pub [i8; 3]);

impl HVariant {
    pub fn standard() -> Self {
        HVariant([1, 1, 1])
    }

    pub fn canonical(&self) -> HVariant {
        if self.0[0] < 0 {
            HVariant([-self.0[0], -self.0[1], -self.0[2]])
        } else {
            *self
        }
    }

    pub fn all() -> [HVariant; 4] {
        [
            HVariant([1, 1, 1]),
            HVariant([1, 1, -1]),
            HVariant([1, -1, 1]),
            HVariant([1, -1, -1]),
        ]
    }

    /// The label-change automorphism realizing the variant: one transposition
    /// at a level-(ℓ-1) node above each level-1 node carrying -1.
    pub fn conjugator(&self, ell: usize) -> TreePortrait {
        let mut g = TreePortrait::identity(ell);
        for (i, &e) in self.canonical().0.iter().enumerate() {
            if e < 0 {
                let mut word = vec![i as u8];
                word.extend(std::iter::repeat_n(0, ell - 2));
                g.set_local(&Label(word), SWAP01);
            }
        }
        g
    }
}

impl fmt::Display for HVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        write!(
            f,
            "({}{}{})",
            if c.0[0] > 0 { '+' } else { '-' },
            if c.0[1] > 0 { '+' } else { '-' },
            if c.0[2] > 0 { '+' } else { '-' },
        )
    }
}

/// Membership in the ε-conjugate of H inside Q_{ℓ,ℓ}: conjugate σ by the
/// label-change automorphism and test equality of sgn_{ℓ-1} over the three
/// level-1 nodes. Requires depth(σ) = ℓ and σ ∈ Q_{ℓ,ℓ}.
pub fn h_membership(sigma: &TreePortrait, ell: usize, variant: HVariant) -> Result<bool> {
    if ell < 2 {
        return Err(Error::BadEll);
    }
    if sigma.depth() != ell {
        return Err(Error::OutOfTree {
            level: sigma.depth(),
            offset: 0,
            depth: ell,
        });
    }
    if q_membership(sigma, ell)? != QClass::InQ {
        return Err(Error::NotInQ);
    }
    let g = variant.conjugator(ell);
    let conjugated = g.compose(sigma).compose(&g.inverse());
    let mut signs = [0i8; 3];
    for i in 0..3u8 {
        signs[i as usize] = sgn(&conjugated, &Label(vec![i]), ell - 1)?;
    }
    Ok(signs[0] == signs[1] && signs[1] == signs[2])
}

// ---------------------------------------------------------------------------
// Signed automorphisms
// ---------------------------------------------------------------------------

/// A tree automorphism together with an abstract character value chi ∈ {±1}
/// (the group-theoretic stand-in for the quadratic character attached to
/// sqrt(-3)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedAut {
    pub aut: TreePortrait,
    pub chi: i8,
}

impl SignedAut {
    pub fn new(aut: TreePortrait, chi: i8) -> Self {
        assert!(chi == 1 || chi == -1);
        SignedAut { aut, chi }
    }
}

/// S(σ, y) = sgn_ℓ(σ,y) · sgn_{ℓ-1}(σ,y) · chi(σ).
pub fn s_value(sigma: &SignedAut, y: &Label, ell: usize) -> Result<i8> {
    Ok(sign_pair(&sigma.aut, y, ell)? * sigma.chi)
}

/// A finite group of signed automorphisms: closed under composition and
/// inverse, with chi multiplicative. Construction verifies all of it.
#[derive(Debug, Clone)]
pub struct SignedGroup {
    depth: usize,
    elements: Vec<SignedAut>,
    index: HashMap<TreePortrait, usize>,
}

impl SignedGroup {
    pub fn new(elements: Vec<SignedAut>) -> Result<Self> {
        let depth = match elements.first() {
            Some(e) => e.aut.depth(),
            None => return Err(Error::NotClosed),
        };
        if elements.iter().any(|e| e.aut.depth() != depth) {
            return Err(Error::DepthMismatch);
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.aut.clone(), i).is_some() {
                return Err(Error::BadCharacter(
                    "duplicate portrait in element list".into(),
                ));
            }
        }
        let group = SignedGroup {
            depth,
            elements,
            index,
        };
        if !group.index.contains_key(&TreePortrait::identity(depth)) {
            return Err(Error::NotClosed);
        }
        for a in &group.elements {
            let inv = a.aut.inverse();
            if !group.index.contains_key(&inv) {
                return Err(Error::NotClosed);
            }
            for b in &group.elements {
                let prod = a.aut.compose(&b.aut);
                match group.index.get(&prod) {
                    None => return Err(Error::NotClosed),
                    Some(&k) => {
                        if group.elements[k].chi != a.chi * b.chi {
                            return Err(Error::BadCharacter(format!(
                                "chi(ab) != chi(a)chi(b) for elements {k}",
                            )));
                        }
                    }
                }
            }
        }
        Ok(group)
    }

    /// Closes a generating set under composition, extending chi
    /// multiplicatively. Fails if the closure exceeds `cap` elements or if
    /// the generator characters are inconsistent with the relations.
    pub fn close_from_generators(gens: Vec<SignedAut>, cap: usize) -> Result<Self> {
        let depth = match gens.first() {
            Some(g) => g.aut.depth(),
            None => return Err(Error::NotClosed),
        };
        if gens.iter().any(|g| g.aut.depth() != depth) {
            return Err(Error::DepthMismatch);
        }
        let mut elements = vec![SignedAut::new(TreePortrait::identity(depth), 1)];
        let mut index: HashMap<TreePortrait, usize> = HashMap::new();
        index.insert(elements[0].aut.clone(), 0);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            let current = elements[i].clone();
            for g in &gens {
                let prod = g.aut.compose(&current.aut);
                let chi = g.chi * current.chi;
                match index.get(&prod) {
                    Some(&k) => {
                        if elements[k].chi != chi {
                            return Err(Error::BadCharacter(
                                "generator characters are inconsistent".into(),
                            ));
                        }
                    }
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::UnsupportedRange(format!(
                                "closure exceeded cap {cap}"
                            )));
                        }
                        elements.push(SignedAut::new(prod.clone(), chi));
                        index.insert(prod, elements.len() - 1);
                        frontier.push(elements.len() - 1);
                    }
                }
            }
        }
        SignedGroup::new(elements)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn elements(&self) -> &[SignedAut] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Conjugates the whole group by a relabeling map g (chi is untouched).
    /// Conjugation is an isomorphism, so the group laws carry over and no
    /// re-validation is needed.
    pub fn conjugate(&self, g: &TreePortrait) -> Result<Self> {
        let g_inv = g.inverse();
        let elements: Vec<SignedAut> = self
            .elements
            .iter()
            .map(|e| SignedAut::new(g.compose(&e.aut).compose(&g_inv), e.chi))
            .collect();
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            index.insert(e.aut.clone(), i);
        }
        Ok(SignedGroup {
            depth: self.depth,
            elements,
            index,
        })
    }
}

// ---------------------------------------------------------------------------
// Relabeling
// ---------------------------------------------------------------------------

/// Verifies the two consequences of the S-composition identities that any
/// honestly-derived S-data satisfies:
///   - S(σ, y) = +1 whenever σ(y) = y, and
///   - S(σ, y) = S(σ', y) whenever σ(y) = σ'(y),
///
/// at every node y with level(y) + ℓ <= depth.
fn check_s_consistency(group: &SignedGroup, ell: usize) -> Result<()> {
    let n = group.depth();
    for level in 0..=(n - ell) {
        for y in Label::all_at_level(level) {
            let mut seen: HashMap<Label, (i8, usize)> = HashMap::new();
            for (i, e) in group.elements().iter().enumerate() {
                let w = e.aut.apply(&y);
                let s = s_value(e, &y, ell)?;
                if w == y && s != 1 {
                    return Err(Error::InconsistentSData(format!(
                        "element {i} fixes node {y} but S = -1"
                    )));
                }
                match seen.get(&w) {
                    None => {
                        seen.insert(w, (s, i));
                    }
                    Some(&(prev, j)) => {
                        if prev != s {
                            return Err(Error::InconsistentSData(format!(
                                "elements {j} and {i} both map {y} to {w} but disagree on S"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Produces a relabeling map g such that, for the conjugated group
/// {gσg⁻¹ : σ ∈ G}, S = +1 at every node of levels 0..depth-ℓ. Processes
/// the levels bottom-up, one orbit at a time: coset representatives σ_w with
/// S(σ_w, y) = -1 get one transposition of labels toggled ℓ levels above w.
/// The postcondition is re-verified before returning.
pub fn relabel(group: &SignedGroup, ell: usize) -> Result<TreePortrait> {
    if ell < 2 {
        return Err(Error::BadEll);
    }
    let n = group.depth();
    if n < ell {
        return Err(Error::UnsupportedRange(format!(
            "relabel needs depth >= ell (depth {n}, ell {ell})"
        )));
    }
    check_s_consistency(group, ell)?;

    let mut g = TreePortrait::identity(n);
    for level in 0..=(n - ell) {
        let conj = group.conjugate(&g)?;
        let mut assigned: HashMap<Label, bool> = HashMap::new();
        for y0 in Label::all_at_level(level) {
            if assigned.contains_key(&y0) {
                continue;
            }
            // Orbit of y0 under the conjugated action, with one
            // representative element per target node.
            let mut reps: Vec<(Label, usize)> = Vec::new();
            let mut seen: HashMap<Label, usize> = HashMap::new();
            for (i, e) in conj.elements().iter().enumerate() {
                let w = e.aut.apply(&y0);
                seen.entry(w).or_insert(i);
            }
            for (w, i) in &seen {
                assigned.insert(w.clone(), true);
                reps.push((w.clone(), *i));
            }
            // W_y: representatives with S = -1 (y0 itself is never in it).
            let mut toggles = Vec::new();
            for (w, i) in &reps {
                let s = s_value(&conj.elements()[*i], &y0, ell)?;
                if s == -1 {
                    debug_assert_ne!(w, &y0);
                    toggles.push(w.clone());
                }
            }
            for w in toggles {
                // One transposition of labels ℓ levels above w: toggle the
                // local at the node ℓ-1 levels above w (leftmost branch).
                let mut word = w.symbols().to_vec();
                word.extend(std::iter::repeat_n(0, ell - 1));
                let wprime = Label(word);
                let mut t = TreePortrait::identity(n);
                t.set_local(&wprime, SWAP01);
                g = t.compose(&g);
            }
        }
    }

    // Postcondition: all S-values are +1 in the new labeling.
    let conj = group.conjugate(&g)?;
    for level in 0..=(n - ell) {
        for y in Label::all_at_level(level) {
            for e in conj.elements() {
                if s_value(e, &y, ell)? != 1 {
                    return Err(Error::InconsistentSData(format!(
                        "postcondition failed at node {y}"
                    )));
                }
            }
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// Enumeration and sampling helpers (desk scale)
// ---------------------------------------------------------------------------

/// Every portrait of the given depth. 6^((3^depth - 1)/2) elements, so this
/// is only sensible for depth <= 2.
pub fn all_portraits(depth: usize) -> Vec<TreePortrait> {
    assert!(depth <= 2, "exhaustive enumeration is a desk-scale tool");
    let nodes: Vec<Label> = (0..depth).flat_map(Label::all_at_level).collect();
    let mut out = vec![TreePortrait::identity(depth)];
    for node in nodes {
        let mut next = Vec::with_capacity(out.len() * 6);
        for p in &out {
            for perm in S3 {
                let mut q = p.clone();
                q.set_local(&node, perm);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Uniformly random portrait.
pub fn random_portrait<R: rand::Rng>(depth: usize, rng: &mut R) -> TreePortrait {
    let mut p = TreePortrait::identity(depth);
    for k in 0..depth {
        for node in Label::all_at_level(k) {
            p.set_local(&node, S3[rng.gen_range(0..6)]);
        }
    }
    p
}

/// Random element with P(y) = target at every constrained node. The
/// constraints decouple: P(y) is the product of the local signs at relative
/// depth ℓ-1 above y, so one toggle per constrained node fixes everything.
pub fn random_constrained<R: rand::Rng>(
    depth: usize,
    ell: usize,
    target: i8,
    rng: &mut R,
) -> TreePortrait {
    assert!(depth >= ell && ell >= 2);
    let mut p = random_portrait(depth, rng);
    for level in 0..=(depth - ell) {
        for y in Label::all_at_level(level) {
            let current = sign_pair(&p, &y, ell).unwrap();
            if current != target {
                let mut word = y.symbols().to_vec();
                word.extend(std::iter::repeat_n(0, ell - 1));
                let node = Label(word);
                p.set_local(&node, perm_compose(&SWAP01, &p.local(&node)));
            }
        }
    }
    p
}
