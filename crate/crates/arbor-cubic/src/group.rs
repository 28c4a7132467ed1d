//! Permutation groups of tree automorphisms.
//!
//! Groups act on the set of all tree nodes at levels 1..=n (3 + 9 + ... + 3^n
//! points; 39 at depth 3). A stabilizer chain over the full node set, with
//! base points in breadth-first order, gives exact orders and membership and
//! makes restriction kernels and point stabilizers fall out of the chain.
//! Elements are recovered as portraits whenever they leave this module.

use std::collections::HashMap;

use num::{BigUint, One};

use crate::error::{Error, Result};
use crate::tree::{
    h_membership, q_membership, sgn, tree_distance, HVariant, Label, QClass, TreePortrait,
    CYCLE012, IDENTITY_PERM, SWAP01, SWAP02, SWAP12,
};

// ---------------------------------------------------------------------------
// Node indexing and flat permutations
// ---------------------------------------------------------------------------

/// Bijection between tree nodes (levels 1..=depth) and 0-based point ids.
#[derive(Debug, Clone)]
pub struct NodeIndex {
    depth: usize,
    labels: Vec<Label>,
    offsets: Vec<usize>,
}

impl NodeIndex {
    pub fn new(depth: usize) -> Self {
        let mut labels = Vec::new();
        let mut offsets = vec![0; depth + 1];
        for level in 1..=depth {
            offsets[level] = labels.len();
            labels.extend(Label::all_at_level(level));
        }
        NodeIndex {
            depth,
            labels,
            offsets,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn num_points(&self) -> usize {
        self.labels.len()
    }

    pub fn point(&self, label: &Label) -> usize {
        debug_assert!(label.level() >= 1 && label.level() <= self.depth);
        let mut idx = 0usize;
        for &s in label.symbols() {
            idx = idx * 3 + s as usize;
        }
        self.offsets[label.level()] + idx
    }

    pub fn label(&self, point: usize) -> &Label {
        &self.labels[point]
    }

    /// Points in breadth-first order (level 1 first): the default base.
    pub fn bfs_points(&self) -> Vec<usize> {
        (0..self.num_points()).collect()
    }

    /// Number of points at levels 1..=m.
    pub fn points_through_level(&self, m: usize) -> usize {
        if m >= self.depth {
            self.num_points()
        } else {
            self.offsets[m + 1]
        }
    }
}

type Perm = Vec<u16>;

fn perm_identity(n: usize) -> Perm {
    (0..n as u16).collect()
}

fn perm_is_identity(p: &Perm) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x as usize)
}

fn perm_compose(outer: &Perm, inner: &Perm) -> Perm {
    inner.iter().map(|&x| outer[x as usize]).collect()
}

fn perm_inverse(p: &Perm) -> Perm {
    let mut q = vec![0u16; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x as usize] = i as u16;
    }
    q
}

fn portrait_to_perm(index: &NodeIndex, sigma: &TreePortrait) -> Perm {
    (0..index.num_points())
        .map(|p| index.point(&sigma.apply(index.label(p))) as u16)
        .collect()
}

fn perm_to_portrait(index: &NodeIndex, perm: &Perm) -> TreePortrait {
    let depth = index.depth();
    let mut out = TreePortrait::identity(depth);
    for level in 0..depth {
        for node in Label::all_at_level(level) {
            let image = if level == 0 {
                Label::root()
            } else {
                index.label(perm[index.point(&node)] as usize).clone()
            };
            let mut local = IDENTITY_PERM;
            for s in 0..3u8 {
                let child_image = index.label(perm[index.point(&node.child(s))] as usize);
                local[s as usize] = child_image.symbols()[level];
                debug_assert!(image.is_prefix_of(child_image));
            }
            out.set_local(&node, local);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Stabilizer chains
// ---------------------------------------------------------------------------

/// Stabilizer chain over an explicit (full, possibly redundant) base.
/// Level i stores the strong generators first siftable to that depth; the
/// generating set of the stabilizer of base[0..i] is the union of the
/// generators stored at levels >= i.
#[derive(Debug, Clone)]
struct StabChain {
    degree: usize,
    base: Vec<usize>,
    stored: Vec<Vec<Perm>>,
    /// transversal[i][p] = Some(g) with g(base[i]) = p, g in the level-i group.
    transversal: Vec<Vec<Option<Perm>>>,
}

impl StabChain {
    fn build(degree: usize, base: Vec<usize>, gens: &[Perm]) -> StabChain {
        let nlevels = base.len();
        let mut chain = StabChain {
            degree,
            base,
            stored: vec![Vec::new(); nlevels],
            transversal: vec![Vec::new(); nlevels],
        };
        for i in 0..nlevels {
            chain.recompute_orbit(i);
        }
        for g in gens {
            let (residue, level) = chain.sift(0, g.clone());
            if !perm_is_identity(&residue) {
                chain.insert(level, residue);
            }
        }
        chain
    }

    fn gens_at(&self, level: usize) -> Vec<Perm> {
        self.stored[level..].iter().flatten().cloned().collect()
    }

    fn recompute_orbit(&mut self, level: usize) {
        let gens = self.gens_at(level);
        let mut trans: Vec<Option<Perm>> = vec![None; self.degree];
        let b = self.base[level];
        trans[b] = Some(perm_identity(self.degree));
        let mut frontier = vec![b];
        while let Some(p) = frontier.pop() {
            let here = trans[p].clone().unwrap();
            for g in &gens {
                let q = g[p] as usize;
                if trans[q].is_none() {
                    trans[q] = Some(perm_compose(g, &here));
                    frontier.push(q);
                }
            }
        }
        self.transversal[level] = trans;
    }

    /// Sifts g through levels starting at `from`; returns the residue and the
    /// level at which sifting stopped (= base length if fully sifted).
    fn sift(&self, from: usize, mut g: Perm) -> (Perm, usize) {
        for i in from..self.base.len() {
            if perm_is_identity(&g) {
                return (g, i);
            }
            let p = g[self.base[i]] as usize;
            match &self.transversal[i][p] {
                None => return (g, i),
                Some(t) => {
                    g = perm_compose(&perm_inverse(t), &g);
                }
            }
        }
        (g, self.base.len())
    }

    /// Inserts a new strong generator at `level` (it fixes base[0..level]),
    /// then restores the defining property by Schreier completion.
    fn insert(&mut self, level: usize, g: Perm) {
        debug_assert!(level < self.base.len(), "full base covers every moved point");
        self.stored[level].push(g);
        for i in (0..=level).rev() {
            self.complete(i);
        }
    }

    /// Ensures the group generated at this level has its base-point orbit and
    /// all Schreier generators sifting to identity below.
    fn complete(&mut self, level: usize) {
        'outer: loop {
            self.recompute_orbit(level);
            let gens = self.gens_at(level);
            let orbit: Vec<usize> = (0..self.degree)
                .filter(|&p| self.transversal[level][p].is_some())
                .collect();
            for &p in &orbit {
                let tp = self.transversal[level][p].clone().unwrap();
                for s in &gens {
                    let q = s[p] as usize;
                    let tq = self.transversal[level][q].clone().unwrap();
                    let schreier = perm_compose(&perm_inverse(&tq), &perm_compose(s, &tp));
                    let (residue, at) = self.sift(level + 1, schreier);
                    if !perm_is_identity(&residue) {
                        self.stored[at].push(residue);
                        for j in ((level + 1)..=at).rev() {
                            self.complete(j);
                        }
                        continue 'outer;
                    }
                }
            }
            return;
        }
    }

    fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for t in &self.transversal {
            let len = t.iter().filter(|e| e.is_some()).count();
            acc *= BigUint::from(len);
        }
        acc
    }

    fn contains(&self, g: &Perm) -> bool {
        let (residue, _) = self.sift(0, g.clone());
        perm_is_identity(&residue)
    }
}

// ---------------------------------------------------------------------------
// PermGroup
// ---------------------------------------------------------------------------

/// A finite group of depth-n tree automorphisms with exact order and
/// membership via a stabilizer chain.
#[derive(Debug, Clone)]
pub struct PermGroup {
    index: NodeIndex,
    generators: Vec<TreePortrait>,
    gen_perms: Vec<Perm>,
    chain: StabChain,
}

/// Builds the group generated by the given portraits (common depth required).
pub fn generate(gens: Vec<TreePortrait>) -> Result<PermGroup> {
    let depth = match gens.first() {
        Some(g) => g.depth(),
        None => return Err(Error::DepthMismatch),
    };
    if gens.iter().any(|g| g.depth() != depth) {
        return Err(Error::DepthMismatch);
    }
    let index = NodeIndex::new(depth);
    let gen_perms: Vec<Perm> = gens.iter().map(|g| portrait_to_perm(&index, g)).collect();
    let chain = StabChain::build(index.num_points(), index.bfs_points(), &gen_perms);
    Ok(PermGroup {
        index,
        generators: gens,
        gen_perms,
        chain,
    })
}

impl PermGroup {
    pub fn depth(&self) -> usize {
        self.index.depth()
    }

    pub fn generators(&self) -> &[TreePortrait] {
        &self.generators
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn contains(&self, sigma: &TreePortrait) -> bool {
        if sigma.depth() != self.depth() {
            return false;
        }
        self.chain.contains(&portrait_to_perm(&self.index, sigma))
    }

    /// Orbit of a node under the group.
    pub fn node_orbit(&self, y: &Label) -> Vec<Label> {
        let start = self.index.point(y);
        let mut seen = vec![false; self.index.num_points()];
        seen[start] = true;
        let mut frontier = vec![start];
        let mut out = vec![y.clone()];
        while let Some(p) = frontier.pop() {
            for g in &self.gen_perms {
                let q = g[p] as usize;
                if !seen[q] {
                    seen[q] = true;
                    frontier.push(q);
                    out.push(self.index.label(q).clone());
                }
            }
        }
        out.sort();
        out
    }

    /// Generators of the stabilizer of a node (Schreier generators).
    pub fn node_stabilizer_gens(&self, y: &Label) -> Vec<TreePortrait> {
        let start = self.index.point(y);
        let n = self.index.num_points();
        let mut trans: Vec<Option<Perm>> = vec![None; n];
        trans[start] = Some(perm_identity(n));
        let mut frontier = vec![start];
        while let Some(p) = frontier.pop() {
            let here = trans[p].clone().unwrap();
            for g in &self.gen_perms {
                let q = g[p] as usize;
                if trans[q].is_none() {
                    trans[q] = Some(perm_compose(g, &here));
                    frontier.push(q);
                }
            }
        }
        let mut out = Vec::new();
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        for p in 0..n {
            let tp = match &trans[p] {
                Some(t) => t.clone(),
                None => continue,
            };
            for g in &self.gen_perms {
                let q = g[p] as usize;
                let tq = trans[q].clone().unwrap();
                let schreier = perm_compose(&perm_inverse(&tq), &perm_compose(g, &tp));
                if perm_is_identity(&schreier) || seen.contains_key(&schreier) {
                    continue;
                }
                seen.insert(schreier.clone(), ());
                out.push(perm_to_portrait(&self.index, &schreier));
            }
        }
        out
    }

    /// Generators of the subgroup fixing every node at levels <= m
    /// (the kernel of restriction to depth m). Falls out of the chain since
    /// the base enumerates nodes in breadth-first order.
    pub fn level_kernel_gens(&self, m: usize) -> Vec<TreePortrait> {
        let cut = self.index.points_through_level(m);
        let mut out = Vec::new();
        for level in 0..self.chain.base.len() {
            if self.chain.base[level] < cut {
                continue;
            }
            for g in &self.chain.stored[level] {
                out.push(perm_to_portrait(&self.index, g));
            }
        }
        // Generators stored at shallow levels that nevertheless fix all the
        // cut points also belong; include them for good measure.
        for level in 0..self.chain.base.len().min(cut) {
            for g in &self.chain.stored[level] {
                if (0..cut).all(|p| g[p] as usize == p) {
                    out.push(perm_to_portrait(&self.index, g));
                }
            }
        }
        out
    }

    /// The restriction of the group to depth m (image under truncation).
    pub fn restriction(&self, m: usize) -> Result<PermGroup> {
        generate(self.generators.iter().map(|g| g.restrict(m)).collect())
    }

    /// All elements, in a deterministic order. Errors when the order exceeds
    /// the cap.
    pub fn elements(&self, cap: usize) -> Result<Vec<TreePortrait>> {
        if self.order() > BigUint::from(cap) {
            return Err(Error::UnsupportedRange(format!(
                "group order {} exceeds enumeration cap {cap}",
                self.order()
            )));
        }
        let mut elems: Vec<Perm> = vec![perm_identity(self.index.num_points())];
        for level in (0..self.chain.base.len()).rev() {
            let coset_reps: Vec<&Perm> = self.chain.transversal[level]
                .iter()
                .flatten()
                .collect();
            if coset_reps.len() == 1 {
                continue;
            }
            let mut next = Vec::with_capacity(elems.len() * coset_reps.len());
            for rep in coset_reps {
                for e in &elems {
                    next.push(perm_compose(rep, e));
                }
            }
            elems = next;
        }
        Ok(elems
            .iter()
            .map(|p| perm_to_portrait(&self.index, p))
            .collect())
    }

    /// Searches for an element sending each constraint source to its target,
    /// by depth-first search over a stabilizer chain whose base lists the
    /// constrained points first.
    pub fn transporter(&self, constraints: &[(Label, Label)]) -> Option<TreePortrait> {
        let mut want: HashMap<usize, usize> = HashMap::new();
        for (from, to) in constraints {
            if from.level() != to.level() {
                return None;
            }
            let f = self.index.point(from);
            let t = self.index.point(to);
            match want.insert(f, t) {
                Some(prev) if prev != t => return None,
                _ => {}
            }
        }
        let mut base: Vec<usize> = want.keys().copied().collect();
        base.sort();
        for p in self.index.bfs_points() {
            if !want.contains_key(&p) {
                base.push(p);
            }
        }
        let chain = StabChain::build(self.index.num_points(), base, &self.gen_perms);
        let n_constrained = want.len();
        let identity = perm_identity(self.index.num_points());
        let found = self.transporter_dfs(&chain, &want, 0, n_constrained, identity);
        found.map(|p| perm_to_portrait(&self.index, &p))
    }

    fn transporter_dfs(
        &self,
        chain: &StabChain,
        want: &HashMap<usize, usize>,
        level: usize,
        n_constrained: usize,
        prefix: Perm,
    ) -> Option<Perm> {
        if level == n_constrained {
            return Some(prefix);
        }
        let b = chain.base[level];
        let target = want[&b];
        // g = prefix ∘ h with h in the level group; g(b) = target forces
        // h(b) = prefix^{-1}(target).
        let needed = perm_inverse(&prefix)[target] as usize;
        match &chain.transversal[level][needed] {
            None => None,
            Some(t) => {
                let next = perm_compose(&prefix, t);
                self.transporter_dfs(chain, want, level + 1, n_constrained, next)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The finite groups Q_{l,n} and friends
// ---------------------------------------------------------------------------

/// |Aut(T_{3,n})| = 6^((3^n - 1)/2).
pub fn aut_order(n: usize) -> BigUint {
    let internal = (3usize.pow(n as u32) - 1) / 2;
    BigUint::from(6u32).pow(internal as u32)
}

/// |Q_{l,n}|: the full automorphism group order for n < l, and
/// |Aut| / 2^((3^(n-l+1) - 1)/2) for n >= l (one halving per constrained node).
pub fn q_order(ell: usize, n: usize) -> BigUint {
    let aut = aut_order(n);
    if n < ell {
        return aut;
    }
    let constrained = (3usize.pow((n - ell + 1) as u32) - 1) / 2;
    aut / BigUint::from(2u32).pow(constrained as u32)
}

/// |Q̃_{l,n}| = |Q_{l,n}| for n < l and 2|Q_{l,n}| for n >= l.
pub fn qtilde_order(ell: usize, n: usize) -> BigUint {
    if n < ell {
        q_order(ell, n)
    } else {
        q_order(ell, n) * BigUint::from(2u32)
    }
}

/// Standard generators of the full automorphism group: one transposition and
/// one 3-cycle at every internal node.
pub fn aut_generators(depth: usize) -> Vec<TreePortrait> {
    let mut out = Vec::new();
    for level in 0..depth {
        for node in Label::all_at_level(level) {
            for perm in [SWAP01, CYCLE012] {
                let mut p = TreePortrait::identity(depth);
                p.set_local(&node, perm);
                out.push(p);
            }
        }
    }
    out
}

pub const Q_GROUP_MAX_DEPTH: usize = 3;

fn q_generators(ell: usize, n: usize) -> Vec<TreePortrait> {
    if n < ell {
        return aut_generators(n);
    }
    let mut gens: Vec<TreePortrait> = q_generators(ell, n - 1)
        .into_iter()
        .map(|g| g.lift(n))
        .collect();
    // Kernel of restriction to depth n-1: 3-cycles at every level-(n-1)
    // node, plus sign-balanced double transpositions above each node at
    // level n - ell.
    for node in Label::all_at_level(n - 1) {
        let mut p = TreePortrait::identity(n);
        p.set_local(&node, CYCLE012);
        gens.push(p);
    }
    for x in Label::all_at_level(n - ell) {
        let tops: Vec<Label> = Label::all_at_level(ell - 1)
            .into_iter()
            .map(|rel| x.join(&rel))
            .collect();
        for other in &tops[1..] {
            let mut p = TreePortrait::identity(n);
            p.set_local(&tops[0], SWAP01);
            p.set_local(other, SWAP01);
            gens.push(p);
        }
    }
    gens
}

/// The group Q_{l,n} = { sigma : every P(y) = +1 } as a permutation group,
/// built from explicit generators (kernel elements plus lifts). Desk scale:
/// n <= 3.
pub fn q_group(ell: usize, n: usize) -> Result<PermGroup> {
    if ell < 2 {
        return Err(Error::BadEll);
    }
    if !(1..=Q_GROUP_MAX_DEPTH).contains(&n) {
        return Err(Error::UnsupportedRange(format!(
            "q_group supports 1 <= n <= {Q_GROUP_MAX_DEPTH}, got {n}"
        )));
    }
    let gens = q_generators(ell, n);
    debug_assert!(gens
        .iter()
        .all(|g| q_membership(g, ell).unwrap() == QClass::InQ));
    let group = generate(gens)?;
    debug_assert_eq!(group.order(), q_order(ell, n));
    Ok(group)
}

/// Q̃_{l,n}: Q plus one coset representative with all sign pairs -1.
pub fn qtilde_group(ell: usize, n: usize) -> Result<PermGroup> {
    if ell < 2 {
        return Err(Error::BadEll);
    }
    if !(1..=Q_GROUP_MAX_DEPTH).contains(&n) {
        return Err(Error::UnsupportedRange(format!(
            "qtilde_group supports 1 <= n <= {Q_GROUP_MAX_DEPTH}, got {n}"
        )));
    }
    let mut gens = q_generators(ell, n);
    if n >= ell {
        let mut rho = TreePortrait::identity(n);
        for level in (ell - 1)..n {
            for node in Label::all_at_level(level) {
                rho.set_local(&node, SWAP01);
            }
        }
        debug_assert_eq!(q_membership(&rho, ell).unwrap(), QClass::InQTildeOnly);
        gens.push(rho);
    }
    generate(gens)
}

// ---------------------------------------------------------------------------
// Arboreal double transitivity
// ---------------------------------------------------------------------------

/// True iff for every distance class j = 1..level and every two ordered pairs
/// of level-`level` nodes at tree distance j, some group element carries the
/// first pair to the second. Computed by orbits on ordered pairs.
pub fn is_arboreally_doubly_transitive(group: &PermGroup, level: usize) -> bool {
    assert!(level >= 1 && level <= group.depth());
    let nodes = Label::all_at_level(level);
    let gens: Vec<&TreePortrait> = group.generators().iter().collect();
    for j in 1..=level {
        let pairs: Vec<(usize, usize)> = {
            let mut v = Vec::new();
            for (ai, a) in nodes.iter().enumerate() {
                for (bi, b) in nodes.iter().enumerate() {
                    if tree_distance(a, b).unwrap() == j {
                        v.push((ai, bi));
                    }
                }
            }
            v
        };
        if pairs.is_empty() {
            return false;
        }
        // Orbit of the first pair under componentwise action.
        let pos: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let node_pos: HashMap<Label, usize> =
            nodes.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut seen = vec![false; pairs.len()];
        seen[0] = true;
        let mut frontier = vec![pairs[0]];
        let mut count = 1usize;
        while let Some((a, b)) = frontier.pop() {
            for g in &gens {
                let ga = node_pos[&g.apply(&nodes[a])];
                let gb = node_pos[&g.apply(&nodes[b])];
                let key = (ga, gb);
                let idx = pos[&key];
                if !seen[idx] {
                    seen[idx] = true;
                    count += 1;
                    frontier.push(key);
                }
            }
        }
        if count != pairs.len() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Generation-theorem verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub ell: usize,
    pub n: usize,
    pub checks: Vec<CheckReport>,
    pub order: BigUint,
    pub expected_order: BigUint,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Compares a depth-m group against Q_{l,m}: containment via generator
/// membership plus exact order equality.
fn equals_q(group: &PermGroup, ell: usize, m: usize) -> (bool, String) {
    let expected = q_order(ell, m);
    let contained = group.generators().iter().all(|g| {
        matches!(q_membership(g, ell), Ok(QClass::InQ))
    });
    let order = group.order();
    let pass = contained && order == expected;
    (
        pass,
        format!("order {order} vs |Q_{{{ell},{m}}}| = {expected}, contained: {contained}"),
    )
}

/// Machine check of the generation theorem's hypotheses and conclusion for a
/// subgroup G of Q_{l,n}:
///   1. the restriction of G to depth n-1 is all of Q_{l,n-1};
///   2. for a level-1 node y, the stabilizer of y restricted to the subtree
///      rooted at y is all of Q_{l,n-1};
///   3. when n = l, the bottom-fixing elements of G escape all four
///      H-variants.
///
/// The conclusion record compares |G| against |Q_{l,n}|.
pub fn verify_generation_theorem(
    group: &PermGroup,
    ell: usize,
    n: usize,
) -> Result<VerificationReport> {
    if ell < 2 || n < ell || n > Q_GROUP_MAX_DEPTH {
        return Err(Error::UnsupportedRange(format!(
            "verification supports 2 <= ell <= n <= {Q_GROUP_MAX_DEPTH}, got ell = {ell}, n = {n}"
        )));
    }
    if group.depth() != n {
        return Err(Error::DepthMismatch);
    }
    let mut checks = Vec::new();

    // Hypothesis 1: restriction to depth n-1.
    let restriction = group.restriction(n - 1)?;
    let (pass1, detail1) = equals_q(&restriction, ell, n - 1);
    checks.push(CheckReport {
        name: "restriction-is-Q".into(),
        pass: pass1,
        detail: detail1,
    });

    // Hypothesis 2: stabilizer of a level-1 node, restricted to its subtree.
    let y = Label::parse("0").unwrap();
    let stab_gens = group.node_stabilizer_gens(&y);
    let subtree_gens: Vec<TreePortrait> = stab_gens.iter().map(|g| g.subtree_at(&y)).collect();
    let (pass2, detail2) = if subtree_gens.is_empty() {
        (
            q_order(ell, n - 1) == BigUint::one(),
            "trivial stabilizer restriction".to_string(),
        )
    } else {
        let subtree_group = generate(subtree_gens)?;
        equals_q(&subtree_group, ell, n - 1)
    };
    checks.push(CheckReport {
        name: "stabilizer-subtree-is-Q".into(),
        pass: pass2,
        detail: detail2,
    });

    // Hypothesis 3 (n = l only): bottom-fixing elements escape every H-variant.
    let mut pass3 = true;
    if n == ell {
        let bot_gens = group.level_kernel_gens(n - 1);
        let mut detail = String::new();
        let mut escapes_all = true;
        for variant in HVariant::all() {
            let contained = bot_gens.iter().all(|g| {
                h_membership(g, ell, variant).unwrap_or_default()
            });
            if contained {
                escapes_all = false;
                detail.push_str(&format!("contained in H{variant}; "));
            }
        }
        if escapes_all {
            detail = format!(
                "bottom-fixing subgroup ({} generators) escapes all four variants",
                bot_gens.len()
            );
        }
        pass3 = escapes_all;
        checks.push(CheckReport {
            name: "bottom-fixing-escapes-H".into(),
            pass: pass3,
            detail,
        });
    }

    let order = group.order();
    let expected_order = q_order(ell, n);
    let conclusion_holds = order == expected_order;
    checks.push(CheckReport {
        name: "conclusion-order".into(),
        pass: conclusion_holds,
        detail: format!("|G| = {order}, |Q_{{{ell},{n}}}| = {expected_order}"),
    });

    Ok(VerificationReport {
        ell,
        n,
        checks,
        order,
        expected_order,
        hypotheses_hold: pass1 && pass2 && pass3,
        conclusion_holds,
    })
}

// ---------------------------------------------------------------------------
// Witness construction
// ---------------------------------------------------------------------------

/// Explicit group elements realizing the constructive steps of the
/// generation argument, each verified against its stated action.
#[derive(Debug, Clone)]
pub struct WitnessSet {
    /// Fixes everything except one 2-cycle above each of the two support
    /// nodes (at level n-1, tree distance m-1 apart).
    pub theta: TreePortrait,
    pub theta_support: (Label, Label),
    pub tau: Option<TreePortrait>,
    pub sigma: Option<TreePortrait>,
    pub lambda: Option<TreePortrait>,
    pub mu: Option<TreePortrait>,
    /// Bottom-fixing element with two negative signs (n = l only).
    pub rho: Option<TreePortrait>,
    /// For sibling pairs (a, b) at level n-1: a transposition above each.
    pub rho_ab: Vec<(Label, Label, TreePortrait)>,
    /// For each level-(n-1) node a: a 3-cycle above a, identity elsewhere.
    pub mu_a: Vec<(Label, TreePortrait)>,
}

/// theta must fix all nodes at levels <= n-1 and act as exactly one 2-cycle
/// above each of z0, z1 and nowhere else.
fn verify_theta(theta: &TreePortrait, z0: &Label, z1: &Label) -> bool {
    let n = theta.depth();
    if !theta.fixes_levels_through(n - 1) {
        return false;
    }
    for node in Label::all_at_level(n - 1) {
        let local = theta.local(&node);
        if &node == z0 || &node == z1 {
            if crate::tree::perm_sign(&local) != -1 {
                return false;
            }
        } else if local != IDENTITY_PERM {
            return false;
        }
    }
    true
}

fn verify_mu_a(mu: &TreePortrait, a: &Label) -> bool {
    let n = mu.depth();
    if !mu.fixes_levels_through(n - 1) {
        return false;
    }
    for node in Label::all_at_level(n - 1) {
        let local = mu.local(&node);
        if &node == a {
            if crate::tree::perm_sign(&local) != 1 || local == IDENTITY_PERM {
                return false;
            }
        } else if local != IDENTITY_PERM {
            return false;
        }
    }
    true
}

fn verify_rho_ab(rho: &TreePortrait, a: &Label, b: &Label) -> bool {
    verify_theta(rho, a, b)
}

/// Constraints pinning the full depth-(n-1) restriction of an element to a
/// prescribed portrait.
fn restriction_constraints(target: &TreePortrait, n: usize) -> Vec<(Label, Label)> {
    Label::all_at_level(n - 1)
        .into_iter()
        .map(|v| {
            let img = target.apply(&v);
            (v, img)
        })
        .collect()
}

/// Builds the constructive witnesses for a group satisfying the generation
/// theorem's hypotheses (which are checked first).
pub fn construct_witnesses(group: &PermGroup, ell: usize, n: usize) -> Result<WitnessSet> {
    let report = verify_generation_theorem(group, ell, n)?;
    for check in &report.checks {
        if check.name != "conclusion-order" && !check.pass {
            return Err(Error::HypothesisFailed(format!(
                "{}: {}",
                check.name, check.detail
            )));
        }
    }

    let mut tau_out = None;
    let mut sigma_out = None;
    let mut lambda_out = None;
    let mut mu_out = None;
    let mut rho_out = None;

    let (theta, z0, z1) = if n > ell {
        let (theta, z0, z1, tau, sigma, lambda, mu) = commutator_theta(group, ell, n)?;
        tau_out = Some(tau);
        sigma_out = Some(sigma);
        lambda_out = Some(lambda);
        mu_out = Some(mu);
        (theta, z0, z1)
    } else {
        // n = l: bottom-fixing element with exactly two negative signs.
        let (theta, z0, z1, rho) = bottom_fixing_theta(group, ell, n)?;
        rho_out = Some(rho);
        (theta, z0, z1)
    };
    if !verify_theta(&theta, &z0, &z1) {
        return Err(Error::SearchExhausted(
            "theta failed its support check".into(),
        ));
    }
    let dist = tree_distance(&z0, &z1)?;

    // Derived witnesses: rho_ab for pairs at level n-1 with distance <= dist, and
    // mu_a for every level-(n-1) node.
    let level_nodes = Label::all_at_level(n - 1);
    let mut rho_ab = Vec::new();
    let mut rho_ab_map: HashMap<(Label, Label), TreePortrait> = HashMap::new();
    for a in &level_nodes {
        for b in &level_nodes {
            if a >= b {
                continue;
            }
            let d = tree_distance(a, b)?;
            if d < 1 || d > dist {
                continue;
            }
            let r = build_rho_ab(group, &theta, &z0, &z1, a, b, n, dist)?;
            if !verify_rho_ab(&r, a, b) {
                return Err(Error::SearchExhausted(format!(
                    "rho_ab failed its support check at ({a}, {b})"
                )));
            }
            rho_ab_map.insert((a.clone(), b.clone()), r.clone());
            rho_ab.push((a.clone(), b.clone(), r));
        }
    }

    let mut mu_a = Vec::new();
    for a in &level_nodes {
        let parent = a.parent().expect("level >= 1");
        let siblings: Vec<Label> = (0..3u8)
            .map(|s| parent.child(s))
            .filter(|s| s != a)
            .collect();
        let (b, c) = (&siblings[0], &siblings[1]);
        let key_ab = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        let key_ac = if a < c {
            (a.clone(), c.clone())
        } else {
            (c.clone(), a.clone())
        };
        let r_ab = rho_ab_map[&key_ab].clone();
        let r_ac = rho_ab_map[&key_ac].clone();
        let m = build_mu_a(group, &r_ab, &r_ac, a, b, c)?;
        if !verify_mu_a(&m, a) {
            return Err(Error::SearchExhausted(format!(
                "mu_a failed its support check at {a}"
            )));
        }
        mu_a.push((a.clone(), m));
    }

    Ok(WitnessSet {
        theta,
        theta_support: (z0, z1),
        tau: tau_out,
        sigma: sigma_out,
        lambda: lambda_out,
        mu: mu_out,
        rho: rho_out,
        rho_ab,
        mu_a,
    })
}

/// Commutator route to theta: out of a lifted 3-cycle
/// and a double transposition produce theta with support distance m-1.
#[allow(clippy::type_complexity)]
fn commutator_theta(
    group: &PermGroup,
    ell: usize,
    n: usize,
) -> Result<(
    TreePortrait,
    Label,
    Label,
    TreePortrait,
    TreePortrait,
    TreePortrait,
    TreePortrait,
)> {
    let m = if n > ell { ell } else { ell - 1 };
    let y = Label::parse("0").unwrap();
    // c at level n-m, on or above y.
    let c = if n - m == 0 {
        return Err(Error::UnsupportedRange("n - m must be >= 1".into()));
    } else {
        let mut word = y.symbols().to_vec();
        while word.len() < n - m {
            word.push(0);
        }
        Label::new(word).unwrap()
    };
    // tau restricted to depth n-1: a 3-cycle at c, identity elsewhere.
    let mut tau_restriction = TreePortrait::identity(n);
    tau_restriction.set_local(&c, CYCLE012);
    let tau = group
        .transporter(&restriction_constraints(&tau_restriction, n))
        .ok_or_else(|| Error::SearchExhausted("no lift of the 3-cycle tau".into()))?;

    // z_i: level-(n-1) representatives above the children of c.
    let mut z = Vec::new();
    for i in 0..3u8 {
        let mut word = c.symbols().to_vec();
        word.push(i);
        while word.len() < n - 1 {
            word.push(0);
        }
        z.push(Label::new(word).unwrap());
    }
    debug_assert_eq!(tau.apply(&z[0]), z[1]);
    debug_assert_eq!(tau.apply(&z[1]), z[2]);

    // sigma: fixes the subtree over y except for one transposition above z0
    // and one above z2.
    let mut sigma_found = None;
    'pairs: for p0 in [SWAP01, SWAP02, SWAP12] {
        for p2 in [SWAP01, SWAP02, SWAP12] {
            let mut constraints = Vec::new();
            // Nodes of the subtree rooted at y, levels 1..=n.
            for rel_level in 0..(n - y.level()) {
                for rel in Label::all_at_level(rel_level + 1) {
                    let node = y.join(&rel);
                    let mut image = node.clone();
                    if node.level() == n {
                        let parent = node.parent().unwrap();
                        let s = *node.symbols().last().unwrap();
                        if parent == z[0] {
                            image = parent.child(p0[s as usize]);
                        } else if parent == z[2] {
                            image = parent.child(p2[s as usize]);
                        }
                    }
                    constraints.push((node, image));
                }
            }
            if let Some(s) = group.transporter(&constraints) {
                sigma_found = Some(s);
                break 'pairs;
            }
        }
    }
    let sigma = sigma_found
        .ok_or_else(|| Error::SearchExhausted("no double transposition sigma".into()))?;

    let lambda = sigma
        .compose(&tau)
        .compose(&sigma.inverse())
        .compose(&tau.inverse());
    // lambda fixes depth n-1 and carries odd signs exactly at z1, z2 over y.
    if !lambda.fixes_levels_through(n - 1) {
        return Err(Error::SearchExhausted("lambda moved a shallow node".into()));
    }
    for node in Label::all_at_level(n - 1) {
        if !y.is_prefix_of(&node) {
            continue;
        }
        let s = sgn(&lambda, &node, 1)?;
        let expect = if node == z[1] || node == z[2] { -1 } else { 1 };
        if s != expect {
            return Err(Error::SearchExhausted(format!(
                "lambda sign at {node} was {s}, expected {expect}"
            )));
        }
    }

    let mu = lambda
        .compose(&tau)
        .compose(&lambda.inverse())
        .compose(&tau.inverse());
    if !mu.fixes_levels_through(n - 1) {
        return Err(Error::SearchExhausted("mu moved a shallow node".into()));
    }
    for node in Label::all_at_level(n - 1) {
        let s = sgn(&mu, &node, 1)?;
        let expect = if node == z[0] || node == z[1] { -1 } else { 1 };
        if s != expect {
            return Err(Error::SearchExhausted(format!(
                "mu sign at {node} was {s}, expected {expect}"
            )));
        }
    }

    let theta = mu.compose(&mu).compose(&mu);
    Ok((theta, z[0].clone(), z[1].clone(), tau, sigma, lambda, mu))
}

/// Route for n = l: a bottom-fixing element with exactly two negative signs
/// cubes (l = 2), or corrects by a prescribed member (l = 3), to the
/// two-transposition theta.
fn bottom_fixing_theta(
    group: &PermGroup,
    ell: usize,
    n: usize,
) -> Result<(TreePortrait, Label, Label, TreePortrait)> {
    debug_assert_eq!(ell, n);
    let bot_gens = group.level_kernel_gens(n - 1);
    let x0i: Vec<Label> = Label::all_at_level(1);
    // Sign patterns of bottom-fixing elements multiply and their product
    // over the three nodes is +1, so any generator with a non-constant
    // pattern carries exactly two minus signs. One must exist whenever the
    // bottom-fixing subgroup escapes the equal-signs condition.
    let mut found = None;
    'search: for e in &bot_gens {
        let mut signs = Vec::new();
        for node in &x0i {
            signs.push(sgn(e, node, ell - 1)?);
        }
        let minus: Vec<usize> = (0..3).filter(|&i| signs[i] == -1).collect();
        if minus.len() == 2 {
            found = Some((e.clone(), minus));
            break 'search;
        }
        debug_assert!(minus.is_empty(), "product of the three signs is +1");
    }
    let (rho, minus) = found.ok_or_else(|| {
        Error::SearchExhausted("no bottom-fixing element with two negative signs".into())
    })?;

    if ell == 2 {
        // rho^3 is exactly one transposition above each negative node.
        let theta = rho.compose(&rho).compose(&rho);
        let z0 = x0i[minus[0]].clone();
        let z1 = x0i[minus[1]].clone();
        Ok((theta, z0, z1, rho))
    } else {
        // Prescribe one transposition above each negative node and check
        // membership; the correction rho^{-1}·theta has all-positive signs,
        // so it lies in the subgroup already certified by the earlier steps.
        let mut z0w = x0i[minus[0]].symbols().to_vec();
        let mut z1w = x0i[minus[1]].symbols().to_vec();
        while z0w.len() < n - 1 {
            z0w.push(0);
        }
        while z1w.len() < n - 1 {
            z1w.push(0);
        }
        let z0 = Label::new(z0w).unwrap();
        let z1 = Label::new(z1w).unwrap();
        let mut theta = TreePortrait::identity(n);
        theta.set_local(&z0, SWAP01);
        theta.set_local(&z1, SWAP01);
        if !group.contains(&theta) {
            return Err(Error::SearchExhausted(
                "prescribed two-transposition theta is not a member".into(),
            ));
        }
        Ok((theta, z0, z1, rho))
    }
}

/// Conjugates of theta produce a transposition above a and
/// above b, for any pair at distance within the theta support distance.
fn build_rho_ab(
    group: &PermGroup,
    theta: &TreePortrait,
    z0: &Label,
    z1: &Label,
    a: &Label,
    b: &Label,
    n: usize,
    m_minus_1: usize,
) -> Result<TreePortrait> {
    // Common ancestor at level (n-1) - m_minus_1 and a third direction c.
    let w_level = (n - 1) - m_minus_1;
    let w = Label::new(a.symbols()[..w_level].to_vec()).unwrap();
    let a_dir = a.symbols()[w_level];
    let b_dir = b.symbols()[w_level];
    let c_dir = (0..3u8)
        .find(|d| *d != a_dir && *d != b_dir)
        .unwrap_or_else(|| (0..3u8).find(|d| *d != a_dir).unwrap());
    let mut cw = w.symbols().to_vec();
    cw.push(c_dir);
    while cw.len() < n - 1 {
        cw.push(0);
    }
    let c = Label::new(cw).unwrap();

    let tau_a = group
        .transporter(&[(z0.clone(), a.clone()), (z1.clone(), c.clone())])
        .ok_or_else(|| Error::SearchExhausted(format!("no tau_a for ({a}, {b})")))?;
    let tau_b = group
        .transporter(&[(z0.clone(), b.clone()), (z1.clone(), c.clone())])
        .ok_or_else(|| Error::SearchExhausted(format!("no tau_b for ({a}, {b})")))?;
    let theta_a = tau_a.compose(theta).compose(&tau_a.inverse());
    let theta_b = tau_b.compose(theta).compose(&tau_b.inverse());
    let prod = theta_a.compose(&theta_b);
    Ok(prod.compose(&prod).compose(&prod))
}

/// Two rho's at a sibling pair compose and square to a clean
/// 3-cycle above a.
fn build_mu_a(
    group: &PermGroup,
    rho_ab: &TreePortrait,
    rho_ac: &TreePortrait,
    a: &Label,
    b: &Label,
    c: &Label,
) -> Result<TreePortrait> {
    let pair_of = |p: &TreePortrait| -> [u8; 3] { p.local(a) };
    let direct = rho_ab.compose(rho_ac);
    if pair_of(rho_ab) != pair_of(rho_ac) {
        return Ok(direct.compose(&direct));
    }
    // Same transposed pair above a: conjugate rho_ac so it moves a different
    // pair. The conjugator maps the third leaf onto a transposed one while
    // fixing the sibling nodes so supports stay disjoint.
    let local = pair_of(rho_ab);
    let moved: Vec<u8> = (0..3u8).filter(|&s| local[s as usize] != s).collect();
    let third = (0..3u8).find(|s| !moved.contains(s)).unwrap();
    let lambda = group
        .transporter(&[
            (a.child(third), a.child(moved[0])),
            (b.clone(), b.clone()),
            (c.clone(), c.clone()),
        ])
        .or_else(|| group.transporter(&[(a.child(third), a.child(moved[0]))]))
        .ok_or_else(|| Error::SearchExhausted(format!("no lambda for mu_a at {a}")))?;
    let conj = lambda.compose(rho_ac).compose(&lambda.inverse());
    let prod = rho_ab.compose(&conj);
    Ok(prod.compose(&prod))
}

// ---------------------------------------------------------------------------
// Group description files
// ---------------------------------------------------------------------------

/// JSON description of a generated subgroup: portrait serializations under
/// "generators", with "ell" and "depth".
#[derive(Debug, Clone)]
pub struct GroupFile {
    pub ell: usize,
    pub depth: usize,
    pub generators: Vec<TreePortrait>,
    pub chi: Option<Vec<i8>>,
}

impl GroupFile {
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("ell".into(), self.ell.into());
        obj.insert("depth".into(), self.depth.into());
        obj.insert(
            "generators".into(),
            serde_json::Value::Array(self.generators.iter().map(|g| g.to_json()).collect()),
        );
        if let Some(chi) = &self.chi {
            obj.insert(
                "chi".into(),
                serde_json::Value::Array(chi.iter().map(|&c| c.into()).collect()),
            );
        }
        serde_json::Value::Object(obj)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadPortrait("expected an object".into()))?;
        let ell = obj
            .get("ell")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadPortrait("missing ell".into()))? as usize;
        let depth = obj
            .get("depth")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadPortrait("missing depth".into()))? as usize;
        let gens_v = obj
            .get("generators")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::BadPortrait("missing generators".into()))?;
        let generators = gens_v
            .iter()
            .map(|g| TreePortrait::from_json(depth, g))
            .collect::<Result<Vec<_>>>()?;
        let chi = match obj.get("chi") {
            None => None,
            Some(serde_json::Value::Array(arr)) => {
                let mut out = Vec::new();
                for x in arr {
                    match x.as_i64() {
                        Some(1) => out.push(1),
                        Some(-1) => out.push(-1),
                        _ => return Err(Error::BadPortrait("chi entries must be ±1".into())),
                    }
                }
                Some(out)
            }
            Some(_) => return Err(Error::BadPortrait("chi must be an array".into())),
        };
        Ok(GroupFile {
            ell,
            depth,
            generators,
            chi,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{all_portraits, random_constrained, random_portrait, sign_pair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lab(s: &str) -> Label {
        Label::parse(s).unwrap()
    }

    #[test]
    fn orders_of_basic_groups() {
        let g = generate(vec![{
            let mut p = TreePortrait::identity(1);
            p.set_local(&Label::root(), CYCLE012);
            p
        }])
        .unwrap();
        assert_eq!(g.order(), BigUint::from(3u32));

        let aut2 = generate(aut_generators(2)).unwrap();
        assert_eq!(aut2.order(), BigUint::from(1296u32));
        assert_eq!(aut_order(2), BigUint::from(1296u32));
        assert_eq!(aut_order(3).to_string(), "13060694016");
    }

    #[test]
    fn bsgs_order_matches_brute_force_closure() {
        // Random 2-generator subgroups of Aut(T_{3,2}).
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..8 {
            let gens = vec![random_portrait(2, &mut rng), random_portrait(2, &mut rng)];
            let group = generate(gens.clone()).unwrap();
            // brute-force closure
            let mut seen: std::collections::HashSet<TreePortrait> =
                [TreePortrait::identity(2)].into_iter().collect();
            let mut frontier: Vec<TreePortrait> = vec![TreePortrait::identity(2)];
            while let Some(e) = frontier.pop() {
                for g in &gens {
                    let prod = g.compose(&e);
                    if seen.insert(prod.clone()) {
                        frontier.push(prod);
                    }
                }
            }
            assert_eq!(group.order(), BigUint::from(seen.len()));
            // membership agrees with closure membership
            for p in all_portraits(2).iter().take(200) {
                assert_eq!(group.contains(p), seen.contains(p));
            }
        }
    }

    #[test]
    fn q22_order_both_routes() {
        let by_filter = all_portraits(2)
            .into_iter()
            .filter(|p| q_membership(p, 2).unwrap() == QClass::InQ)
            .count();
        assert_eq!(by_filter, 648);
        let group = q_group(2, 2).unwrap();
        assert_eq!(group.order(), BigUint::from(648u32));
        assert_eq!(q_order(2, 2), BigUint::from(648u32));
        // The chain's membership test and the sign-based test agree on all
        // 1296 portraits.
        for p in all_portraits(2) {
            assert_eq!(
                group.contains(&p),
                q_membership(&p, 2).unwrap() == QClass::InQ
            );
        }
    }

    #[test]
    fn q23_order_matches_closed_form() {
        let group = q_group(2, 3).unwrap();
        assert_eq!(group.order().to_string(), "816293376");
        assert_eq!(q_order(2, 3).to_string(), "816293376");
        // 6^13 / 2^4
        let expect = BigUint::from(6u32).pow(13) / BigUint::from(16u32);
        assert_eq!(group.order(), expect);
    }

    #[test]
    fn q33_order_matches_closed_form() {
        let group = q_group(3, 3).unwrap();
        assert_eq!(group.order(), q_order(3, 3));
        assert_eq!(group.order(), aut_order(3) / BigUint::from(2u32));
    }

    #[test]
    fn qtilde_index_two_and_aut_index_growth() {
        let q22 = q_group(2, 2).unwrap();
        let qt22 = qtilde_group(2, 2).unwrap();
        assert_eq!(qt22.order(), q22.order() * BigUint::from(2u32));
        assert_eq!(aut_order(2) / qt22.order(), BigUint::one());

        let q23 = q_group(2, 3).unwrap();
        let qt23 = qtilde_group(2, 3).unwrap();
        assert_eq!(qt23.order(), q23.order() * BigUint::from(2u32));
        assert_eq!(aut_order(3) / qt23.order(), BigUint::from(8u32));
        assert_eq!(qtilde_order(2, 3), qt23.order());
    }

    #[test]
    fn membership_cross_route_at_depth_three() {
        // Two independent membership tests — chain sifting and the sign
        // characterization — agree on constrained samples from both cosets
        // and on unconstrained random portraits.
        let q23 = q_group(2, 3).unwrap();
        let qt23 = qtilde_group(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(271828);
        for _ in 0..200 {
            let a = random_constrained(3, 2, 1, &mut rng);
            assert!(q23.contains(&a));
            assert!(qt23.contains(&a));
            let b = random_constrained(3, 2, -1, &mut rng);
            assert!(!q23.contains(&b));
            assert!(qt23.contains(&b));
            let c = random_portrait(3, &mut rng);
            let class = q_membership(&c, 2).unwrap();
            assert_eq!(q23.contains(&c), class == QClass::InQ);
            assert_eq!(qt23.contains(&c), class != QClass::Outside);
        }
    }

    #[test]
    fn psi_is_a_surjective_homomorphism_at_depth_two() {
        // sigma -> P(x0) on Q̃_{2,2} = Aut(T_{3,2}), kernel Q_{2,2}.
        let all = all_portraits(2);
        let p_of = |s: &TreePortrait| sign_pair(s, &Label::root(), 2).unwrap();
        let mut kernel = 0usize;
        let mut onto_minus = false;
        for s in &all {
            if p_of(s) == 1 {
                kernel += 1;
            } else {
                onto_minus = true;
            }
        }
        assert_eq!(kernel, 648);
        assert!(onto_minus);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let a = &all[rng.gen_range(0..all.len())];
            let b = &all[rng.gen_range(0..all.len())];
            assert_eq!(p_of(&a.compose(b)), p_of(a) * p_of(b));
        }
    }

    #[test]
    fn double_transitivity() {
        let aut2 = generate(aut_generators(2)).unwrap();
        assert!(is_arboreally_doubly_transitive(&aut2, 2));
        let q22 = q_group(2, 2).unwrap();
        assert!(is_arboreally_doubly_transitive(&q22, 2));
        let q23 = q_group(2, 3).unwrap();
        assert!(is_arboreally_doubly_transitive(&q23, 3));
        let trivial = generate(vec![TreePortrait::identity(2)]).unwrap();
        assert!(!is_arboreally_doubly_transitive(&trivial, 2));
    }

    #[test]
    fn restriction_and_kernel() {
        let q23 = q_group(2, 3).unwrap();
        let r = q23.restriction(2).unwrap();
        assert_eq!(r.order(), BigUint::from(648u32));
        // Kernel of restriction to depth 2: order = |Q_{2,3}| / |Q_{2,2}|.
        let kernel_gens = q23.level_kernel_gens(2);
        let kernel = generate(kernel_gens).unwrap();
        assert_eq!(
            kernel.order(),
            q_order(2, 3) / q_order(2, 2)
        );
        for g in kernel.generators() {
            assert!(g.fixes_levels_through(2));
        }
    }

    #[test]
    fn transporter_finds_prescribed_elements() {
        let q22 = q_group(2, 2).unwrap();
        // Move node 0 to node 2.
        let t = q22
            .transporter(&[(lab("0"), lab("2"))])
            .expect("transitive at level 1");
        assert_eq!(t.apply(&lab("0")), lab("2"));
        assert!(q22.contains(&t));
        // Impossible: a transposition above a single node is outside Q_{2,2}.
        let impossible = q22.transporter(&[
            (lab("00"), lab("01")),
            (lab("01"), lab("00")),
            (lab("02"), lab("02")),
            (lab("10"), lab("10")),
            (lab("11"), lab("11")),
            (lab("12"), lab("12")),
            (lab("20"), lab("20")),
            (lab("21"), lab("21")),
            (lab("22"), lab("22")),
            (lab("0"), lab("0")),
            (lab("1"), lab("1")),
            (lab("2"), lab("2")),
        ]);
        assert!(impossible.is_none());
    }

    #[test]
    fn stabilizer_of_level_one_node() {
        let q22 = q_group(2, 2).unwrap();
        let gens = q22.node_stabilizer_gens(&lab("0"));
        let stab = generate(gens.clone()).unwrap();
        assert_eq!(stab.order(), BigUint::from(216u32)); // 648 / 3
        for g in &gens {
            assert_eq!(g.apply(&lab("0")), lab("0"));
        }
        // Restriction above the fixed node is the full S3.
        let sub = generate(gens.iter().map(|g| g.subtree_at(&lab("0"))).collect()).unwrap();
        assert_eq!(sub.order(), BigUint::from(6u32));
    }

    #[test]
    fn verify_generation_for_q22() {
        let q22 = q_group(2, 2).unwrap();
        let report = verify_generation_theorem(&q22, 2, 2).unwrap();
        assert!(report.hypotheses_hold, "{:?}", report.checks);
        assert!(report.conclusion_holds);
    }

    #[test]
    fn verify_generation_for_q23() {
        let q23 = q_group(2, 3).unwrap();
        let report = verify_generation_theorem(&q23, 2, 3).unwrap();
        assert!(report.hypotheses_hold, "{:?}", report.checks);
        assert!(report.conclusion_holds);
        assert_eq!(report.order.to_string(), "816293376");
    }

    #[test]
    fn h_preimage_counterexample_fails_third_hypothesis() {
        // The subgroup of Q_{2,2} defined by the equal-signs condition: all
        // top locals even (the only equal pattern with product +1), any root
        // local. Its bottom-fixing part sits inside every H-variant.
        let mut gens = Vec::new();
        for perm in [SWAP01, CYCLE012] {
            let mut p = TreePortrait::identity(2);
            p.set_local(&Label::root(), perm);
            gens.push(p);
        }
        for node in Label::all_at_level(1) {
            let mut p = TreePortrait::identity(2);
            p.set_local(&node, CYCLE012);
            gens.push(p);
        }
        let h = generate(gens).unwrap();
        assert_eq!(h.order(), BigUint::from(162u32));
        let report = verify_generation_theorem(&h, 2, 2).unwrap();
        let b3 = report.check("bottom-fixing-escapes-H").unwrap();
        assert!(!b3.pass);
        assert!(!report.conclusion_holds);
        // The second hypothesis fails too: the stabilizer restriction is A3.
        let b2 = report.check("stabilizer-subtree-is-Q").unwrap();
        assert!(!b2.pass);
        let b1 = report.check("restriction-is-Q").unwrap();
        assert!(b1.pass);
    }

    #[test]
    fn witnesses_for_q22() {
        let q22 = q_group(2, 2).unwrap();
        let w = construct_witnesses(&q22, 2, 2).unwrap();
        assert!(w.rho.is_some());
        assert!(verify_theta(&w.theta, &w.theta_support.0, &w.theta_support.1));
        assert_eq!(
            tree_distance(&w.theta_support.0, &w.theta_support.1).unwrap(),
            1
        );
        assert_eq!(w.mu_a.len(), 3);
        assert_eq!(w.rho_ab.len(), 3);
        for (a, mu) in &w.mu_a {
            assert!(verify_mu_a(mu, a));
            assert!(q22.contains(mu));
        }
        for (a, b, r) in &w.rho_ab {
            assert!(verify_rho_ab(r, a, b));
            assert!(q22.contains(r));
        }
    }

    #[test]
    fn witnesses_for_q23() {
        let q23 = q_group(2, 3).unwrap();
        let w = construct_witnesses(&q23, 2, 3).unwrap();
        assert!(w.tau.is_some() && w.sigma.is_some() && w.lambda.is_some() && w.mu.is_some());
        assert!(verify_theta(&w.theta, &w.theta_support.0, &w.theta_support.1));
        assert_eq!(
            tree_distance(&w.theta_support.0, &w.theta_support.1).unwrap(),
            1
        );
        assert_eq!(w.mu_a.len(), 9);
        assert_eq!(w.rho_ab.len(), 9);
        for (a, mu) in &w.mu_a {
            assert!(verify_mu_a(mu, a));
            assert!(q23.contains(mu));
        }
        for (a, b, r) in &w.rho_ab {
            assert!(verify_rho_ab(r, a, b));
            assert!(q23.contains(r));
        }
        // theta really is in the group.
        assert!(q23.contains(&w.theta));
    }

    #[test]
    fn verification_and_witnesses_at_ell_three() {
        let q33 = q_group(3, 3).unwrap();
        let report = verify_generation_theorem(&q33, 3, 3).unwrap();
        assert!(report.hypotheses_hold, "{:?}", report.checks);
        assert!(report.conclusion_holds);
        let w = construct_witnesses(&q33, 3, 3).unwrap();
        assert!(w.rho.is_some());
        assert!(verify_theta(&w.theta, &w.theta_support.0, &w.theta_support.1));
        // Support distance l - 1 = 2 at depth 3.
        assert_eq!(
            tree_distance(&w.theta_support.0, &w.theta_support.1).unwrap(),
            2
        );
        for (a, mu) in &w.mu_a {
            assert!(verify_mu_a(mu, a));
            assert!(q33.contains(mu));
        }
        for (a, b, r) in &w.rho_ab {
            assert!(verify_rho_ab(r, a, b));
            assert!(q33.contains(r));
        }
    }

    #[test]
    fn witness_construction_refuses_bad_hypotheses() {
        let mut gens = Vec::new();
        for perm in [SWAP01, CYCLE012] {
            let mut p = TreePortrait::identity(2);
            p.set_local(&Label::root(), perm);
            gens.push(p);
        }
        let tiny = generate(gens).unwrap();
        assert!(matches!(
            construct_witnesses(&tiny, 2, 2),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn group_file_round_trip() {
        let q22 = q_group(2, 2).unwrap();
        let file = GroupFile {
            ell: 2,
            depth: 2,
            generators: q22.generators().to_vec(),
            chi: None,
        };
        let v = file.to_json();
        let parsed = GroupFile::from_json(&v).unwrap();
        assert_eq!(parsed.ell, 2);
        assert_eq!(parsed.depth, 2);
        assert_eq!(parsed.generators, q22.generators());
    }
}
