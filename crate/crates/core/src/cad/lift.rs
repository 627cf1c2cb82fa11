//! Stack construction over sample points.

use std::time::Instant;

use num_traits::{Signed, Zero};

use super::field::{lift_roots, SamplePoint};
use super::mpoly::MPoly;
use super::project::Projection;
use crate::algebra::rat::{self, q, Q};
use crate::algebra::upoly::UPoly;
use crate::error::{Error, Result};

/// Budgets for a decomposition.
#[derive(Clone, Debug)]
pub struct CadOptions {
    pub max_vars: usize,
    pub max_degree: u32,
    pub max_polys: usize,
    pub max_cells: usize,
    pub deadline: Option<Instant>,
    /// Seed for the random sampling that precedes exact searches.
    pub seed: u64,
}

impl Default for CadOptions {
    fn default() -> Self {
        CadOptions { max_vars: 4, max_degree: 6, max_polys: 12, max_cells: 250_000, deadline: env_deadline(), seed: 7 }
    }
}

/// Deadline from `CODFKIT_BUDGET_MS`, if set.
pub fn env_deadline() -> Option<Instant> {
    let ms: u64 = std::env::var("CODFKIT_BUDGET_MS").ok()?.trim().parse().ok()?;
    Some(Instant::now() + std::time::Duration::from_millis(ms))
}

impl CadOptions {
    /// No size limits (internal callers that have already reduced their input).
    pub fn unbounded() -> Self {
        CadOptions { max_vars: usize::MAX, max_degree: u32::MAX, max_polys: usize::MAX, ..Default::default() }
    }

    pub fn check_time(&self, what: impl FnOnce() -> String) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Resource(format!("time budget exhausted ({})", what()))),
            _ => Ok(()),
        }
    }
}

/// A cell of the cylindrical tree. `pos` is the position in its stack:
/// even positions are sectors, odd positions sections.
#[derive(Clone, Debug)]
pub struct Node {
    pub pos: usize,
    pub orig_pos: usize,
    pub sample: SamplePoint,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub signs: Vec<i8>,
}

impl Node {
    pub fn is_sector(&self) -> bool {
        self.pos % 2 == 0
    }
}

/// A cylindrical decomposition of ℝ^depth sign-invariant for `proj`.
#[derive(Clone, Debug)]
pub struct Cad {
    pub n: usize,
    pub proj: Projection,
    pub levels: Vec<Vec<Node>>,
    /// Factors treated as original when computing `orig_pos`.
    pub marks: Option<Vec<Vec<bool>>>,
}

impl Cad {
    /// Lifts through the first `depth` levels of `proj`.
    pub fn build(proj: Projection, depth: usize, marks: Option<Vec<Vec<bool>>>, opts: &CadOptions) -> Result<Cad> {
        let n = proj.levels.len();
        let mut levels: Vec<Vec<Node>> = Vec::new();
        let mut total = 0usize;
        for k in 0..depth.min(n) {
            let mut next = Vec::new();
            let parents: Vec<Option<usize>> =
                if k == 0 { vec![None] } else { (0..levels[k - 1].len()).map(Some).collect() };
            for par in parents {
                opts.check_time(|| format!("lifting level {} of {n}, {total} cells so far", k + 1))?;
                let base = match par {
                    None => SamplePoint::origin(),
                    Some(i) => levels[k - 1][i].sample.clone(),
                };
                let mk = marks.as_ref().map(|m| m[k].as_slice());
                let stack = lift_stack(&base, &proj.levels[k], k, mk, opts)?;
                let start = next.len();
                for (j, node) in stack.into_iter().enumerate() {
                    next.push(Node { parent: par, ..node });
                    if let Some(i) = par {
                        levels[k - 1][i].children.push(start + j);
                    }
                }
                total += next.len() - start;
                if total > opts.max_cells {
                    return Err(Error::Resource(format!(
                        "cell budget exceeded: more than {} cells at level {} of {n}",
                        opts.max_cells,
                        k + 1
                    )));
                }
            }
            levels.push(next);
        }
        Ok(Cad { n, proj, levels, marks })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Stack positions from the root down to the node.
    pub fn path(&self, level: usize, idx: usize) -> Vec<usize> {
        self.walk(level, idx).into_iter().map(|(l, i)| self.levels[l][i].pos).collect()
    }

    pub fn orig_path(&self, level: usize, idx: usize) -> Vec<usize> {
        self.walk(level, idx).into_iter().map(|(l, i)| self.levels[l][i].orig_pos).collect()
    }

    fn walk(&self, level: usize, idx: usize) -> Vec<(usize, usize)> {
        let mut out = vec![(level, idx)];
        let mut cur = self.levels[level][idx].parent;
        let mut l = level;
        while let Some(i) = cur {
            l -= 1;
            out.push((l, i));
            cur = self.levels[l][i].parent;
        }
        out.reverse();
        out
    }

    /// 1 for sector coordinates, 0 for section coordinates.
    pub fn index(&self, level: usize, idx: usize) -> Vec<u8> {
        self.path(level, idx).into_iter().map(|p| if p % 2 == 0 { 1 } else { 0 }).collect()
    }

    pub fn dim(&self, level: usize, idx: usize) -> usize {
        self.index(level, idx).into_iter().filter(|b| *b == 1).count()
    }

    /// Signs of all projection factors of levels 0..=level at the node.
    pub fn sign_vector(&self, level: usize, idx: usize) -> Vec<i8> {
        self.walk(level, idx).into_iter().flat_map(|(l, i)| self.levels[l][i].signs.clone()).collect()
    }

    /// Factors of levels 0..depth in sign-vector order.
    pub fn factors(&self, depth: usize) -> Vec<MPoly> {
        self.proj.levels[..depth].iter().flatten().cloned().collect()
    }

    /// Leaf descendants (at level `to`) of a node at level `level`.
    pub fn descendants(&self, level: usize, idx: usize, to: usize) -> Vec<usize> {
        let mut cur = vec![idx];
        for l in level..to {
            cur = cur.iter().flat_map(|&i| self.levels[l][i].children.clone()).collect();
        }
        cur
    }
}

/// The stack over `base` for factors `fs` with main variable x_k.
pub fn lift_stack(base: &SamplePoint, fs: &[MPoly], k: usize, marks: Option<&[bool]>, opts: &CadOptions) -> Result<Vec<Node>> {
    let polys: Vec<Vec<UPoly>> =
        fs.iter().map(|f| f.coeffs_in(&k).iter().map(|c| base.substitute(c)).collect()).collect();
    let mut sections = lift_roots(base, &polys, opts)?;
    let mut samples: Vec<SamplePoint> = Vec::new();
    if sections.is_empty() {
        samples.push(base.push_rational(&Q::zero()));
    } else {
        let (lo, _) = sections[0].enclose_coord(k);
        samples.push(base.push_rational(&below(&lo)));
        for i in 0..sections.len() {
            samples.push(sections[i].clone());
            if i + 1 < sections.len() {
                let (a, b) = sections.split_at_mut(i + 1);
                let r = separate(&mut a[i], &mut b[0], k);
                samples.push(base.push_rational(&r));
            }
        }
        let (_, hi) = sections.last().unwrap().enclose_coord(k);
        samples.push(base.push_rational(&above(&hi)));
    }
    let mut nodes: Vec<Node> = Vec::new();
    let mut orig_sections = 0usize;
    let mut below_signs: Vec<i8> = Vec::new();
    for (pos, mut s) in samples.into_iter().enumerate() {
        let signs: Vec<i8> = fs.iter().map(|f| s.sign(f) as i8).collect();
        let orig_pos = if pos % 2 == 0 {
            below_signs = signs.clone();
            2 * orig_sections
        } else {
            let is_orig = (0..fs.len()).any(|i| {
                signs[i] == 0 && below_signs[i] != 0 && marks.map(|m| m[i]).unwrap_or(true)
            });
            if is_orig {
                orig_sections += 1;
                2 * orig_sections - 1
            } else {
                2 * orig_sections
            }
        };
        nodes.push(Node { pos, orig_pos, sample: s, parent: None, children: vec![], signs });
    }
    Ok(nodes)
}

fn below(lo: &Q) -> Q {
    if lo.is_positive() {
        Q::zero()
    } else {
        lo.floor() - q(1)
    }
}

fn above(hi: &Q) -> Q {
    if hi.is_negative() {
        Q::zero()
    } else {
        hi.ceil() + q(1)
    }
}

/// A simple rational strictly between coordinate k of two sample points (a < b).
pub fn separate(a: &mut SamplePoint, b: &mut SamplePoint, k: usize) -> Q {
    loop {
        let (_, ah) = a.enclose_coord(k);
        let (bl, _) = b.enclose_coord(k);
        if ah < bl {
            let w = (&bl - &ah) / q(4);
            return rat::simplest_between(&(&ah + &w), &(&bl - &w));
        }
        a.field.refine();
        b.field.refine();
        a.tidy();
        b.tidy();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cad::project::project;

    fn x() -> MPoly {
        MPoly::var(0)
    }
    fn y() -> MPoly {
        MPoly::var(1)
    }

    #[test]
    fn circle_has_thirteen_cells() {
        let f = &(&(&x() * &x()) + &(&y() * &y())) - &MPoly::int(1);
        let cad = Cad::build(project(&[f], 2, false), 2, None, &CadOptions::default()).unwrap();
        assert_eq!(cad.levels[0].len(), 5);
        let sizes: Vec<usize> = cad.levels[0].iter().map(|c| c.children.len()).collect();
        assert_eq!(sizes, vec![1, 3, 5, 3, 1]);
        assert_eq!(cad.levels[1].len(), 13);
    }

    #[test]
    fn irrational_sections() {
        // y^2 = 2 over every x; and the line y = x meets it at x = ±√2
        let f = &(&y() * &y()) - &MPoly::int(2);
        let g = &y() - &x();
        let cad = Cad::build(project(&[f, g], 2, false), 2, None, &CadOptions::default()).unwrap();
        // x-cells: (-inf,-√2), -√2, (-√2,√2), √2, (√2,inf)
        assert_eq!(cad.levels[0].len(), 5);
        let sizes: Vec<usize> = cad.levels[0].iter().map(|c| c.children.len()).collect();
        assert_eq!(sizes, vec![7, 5, 7, 5, 7]);
    }

    #[test]
    fn algebraic_base_with_algebraic_fiber() {
        // x^2 = 2 and y^2 = x: over x = √2 the fiber roots are ±2^(1/4)
        let f = &(&x() * &x()) - &MPoly::int(2);
        let g = &(&y() * &y()) - &x();
        let cad = Cad::build(project(&[f, g], 2, false), 2, None, &CadOptions::default()).unwrap();
        let xs: Vec<usize> = cad.levels[0].iter().map(|c| c.children.len()).collect();
        // x cells: (-inf,-√2) -√2 (-√2,0) 0 (0,√2) √2 (√2,inf)
        assert_eq!(xs, vec![1, 1, 1, 3, 5, 5, 5]);
    }
}
