//! Finite presentations and Todd-Coxeter coset enumeration.

use super::{Caps, Elem, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A letter: generator index `i` as `i + 1`, its inverse as `-(i + 1)`.
pub type Letter = i32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<Letter>>,
}

fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|&l| -l).collect()
}

fn parse_word(chars: &[char], pos: &mut usize, generators: usize) -> Result<Vec<Letter>> {
    let bad = |msg: String| Error::Precondition(format!("relator: {msg}"));
    let mut word = Vec::new();
    while *pos < chars.len() && chars[*pos] != ')' {
        let item = match chars[*pos] {
            '(' => {
                *pos += 1;
                let inner = parse_word(chars, pos, generators)?;
                if chars.get(*pos) != Some(&')') {
                    return Err(bad("unbalanced parenthesis".into()));
                }
                *pos += 1;
                inner
            }
            c @ 'a'..='z' => {
                let i = c as usize - 'a' as usize;
                if i >= generators {
                    return Err(bad(format!("generator {c} out of range")));
                }
                *pos += 1;
                vec![i as Letter + 1]
            }
            c => return Err(bad(format!("unexpected {c:?}"))),
        };
        let mut exp: i64 = 1;
        if chars.get(*pos) == Some(&'^') {
            *pos += 1;
            let start = *pos;
            if chars.get(*pos) == Some(&'-') {
                *pos += 1;
            }
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let text: String = chars[start..*pos].iter().collect();
            exp = text.parse().map_err(|_| bad(format!("bad exponent {text:?}")))?;
        }
        let base = if exp < 0 { invert(&item) } else { item };
        for _ in 0..exp.unsigned_abs() {
            word.extend_from_slice(&base);
        }
    }
    Ok(word)
}

impl Presentation {
    /// Parses relators written with generators `a`, `b`, ..., parentheses
    /// and integer exponents, e.g. `"(ab)^3"` or `"a^-1bab"`.
    pub fn parse(generators: usize, relators: &[&str]) -> Result<Self> {
        let relators = relators
            .iter()
            .map(|r| {
                let chars: Vec<char> = r.chars().filter(|c| !c.is_whitespace()).collect();
                let mut pos = 0;
                let w = parse_word(&chars, &mut pos, generators)?;
                if pos != chars.len() {
                    return Err(Error::Precondition(format!("relator {r:?}: unbalanced parenthesis")));
                }
                Ok(w)
            })
            .collect::<Result<_>>()?;
        Ok(Presentation { generators, relators })
    }

    /// Evaluates a word on generator images in `g`.
    pub fn evaluate(g: &FiniteGroup, images: &[Elem], word: &[Letter]) -> Elem {
        word.iter().fold(g.identity(), |acc, &l| {
            let x = images[l.unsigned_abs() as usize - 1];
            g.mul(acc, if l > 0 { x } else { g.inv(x) })
        })
    }

    pub fn relators_hold(&self, g: &FiniteGroup, images: &[Elem]) -> bool {
        self.relators
            .iter()
            .all(|r| Self::evaluate(g, images, r) == g.identity())
    }

    /// Right-regular permutation representation of the presented group,
    /// via coset enumeration over the trivial subgroup. Returns the group
    /// and the images of the generators.
    pub fn enumerate(&self, max_cosets: usize) -> Result<(FiniteGroup, Vec<Elem>)> {
        let table = CosetTable::enumerate(self, max_cosets)?;
        let degree = table.len();
        let perms: Vec<Vec<u16>> = (0..self.generators)
            .map(|g| table.iter().map(|row| row[2 * g] as u16).collect())
            .collect();
        let caps = Caps {
            order: max_cosets,
            ..Caps::default()
        };
        let group = FiniteGroup::from_permutations(&perms, degree, &caps)?;
        let images = perms
            .iter()
            .map(|p| {
                let Some(i) = group.elements().find(|&e| match group.carrier() {
                    super::Carrier::Permutations { elements, .. } => &elements[e as usize] == p,
                    _ => false,
                }) else {
                    unreachable!("generator is an element")
                };
                i
            })
            .collect();
        Ok((group, images))
    }

    /// Whether `g` is isomorphic to the presented group of order `order`:
    /// some generator images satisfy the relators and generate `g`.
    pub fn find_generators(&self, g: &std::sync::Arc<FiniteGroup>, order: usize, image_orders: &[u64]) -> Option<Vec<Elem>> {
        if g.order() != order {
            return None;
        }
        let pools: Vec<Vec<Elem>> = image_orders
            .iter()
            .map(|&o| g.elements().filter(|&x| g.element_order(x) == o).collect())
            .collect();
        let mut chosen = Vec::with_capacity(self.generators);
        self.search_images(g, &pools, &mut chosen)
    }

    fn search_images(
        &self,
        g: &std::sync::Arc<FiniteGroup>,
        pools: &[Vec<Elem>],
        chosen: &mut Vec<Elem>,
    ) -> Option<Vec<Elem>> {
        if chosen.len() == pools.len() {
            let ok = self.relators_hold(g, chosen) && Subgroup::generated(g, chosen).order() == g.order();
            return ok.then(|| chosen.clone());
        }
        for &x in &pools[chosen.len()] {
            chosen.push(x);
            if let Some(found) = self.search_images(g, pools, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
}

const NONE: usize = usize::MAX;

struct CosetTable {
    columns: usize,
    rows: Vec<Vec<usize>>,
    forward: Vec<usize>,
}

impl CosetTable {
    fn col(letter: Letter) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    fn inv_col(c: usize) -> usize {
        c ^ 1
    }

    fn define(&mut self, c: usize, x: usize, max: usize) -> Result<()> {
        let live = self.forward.iter().enumerate().filter(|(i, &f)| *i == f).count();
        if live >= max {
            return Err(Error::cap("coset enumeration", live + 1, max));
        }
        let d = self.rows.len();
        self.rows.push(vec![NONE; self.columns]);
        self.forward.push(d);
        self.rows[c][x] = d;
        self.rows[d][Self::inv_col(x)] = c;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.forward[r] != r {
            r = self.forward[r];
        }
        let mut j = c;
        while self.forward[j] != r {
            let next = self.forward[j];
            self.forward[j] = r;
            j = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.forward[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for x in 0..self.columns {
                let f = self.rows[e][x];
                if f == NONE {
                    continue;
                }
                let xi = Self::inv_col(x);
                if self.rows[f][xi] == e {
                    self.rows[f][xi] = NONE;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.rows[e1][x] != NONE {
                    let t = self.rows[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.rows[f1][xi] != NONE {
                    let t = self.rows[f1][xi];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.rows[e1][x] = f1;
                    self.rows[f1][xi] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize], max: usize) -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, word.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.rows[f][word[i]] != NONE {
                f = self.rows[f][word[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.rows[b][Self::inv_col(word[j as usize])] != NONE {
                b = self.rows[b][Self::inv_col(word[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.rows[f][word[i]] = b;
                self.rows[b][Self::inv_col(word[i])] = f;
                return Ok(());
            }
            self.define(f, word[i], max)?;
        }
    }

    /// HLT enumeration; returns the compressed table.
    fn enumerate(p: &Presentation, max: usize) -> Result<Vec<Vec<usize>>> {
        let columns = 2 * p.generators;
        let mut t = CosetTable {
            columns,
            rows: vec![vec![NONE; columns]],
            forward: vec![0],
        };
        let words: Vec<Vec<usize>> = p
            .relators
            .iter()
            .map(|r| r.iter().map(|&l| Self::col(l)).collect())
            .collect();
        let mut c = 0;
        while c < t.rows.len() {
            for w in &words {
                if t.forward[c] != c {
                    break;
                }
                t.scan_and_fill(c, w, max)?;
            }
            for x in 0..columns {
                if t.forward[c] == c && t.rows[c][x] == NONE {
                    t.define(c, x, max)?;
                }
            }
            c += 1;
        }
        let live: Vec<usize> = (0..t.rows.len()).filter(|&i| t.forward[i] == i).collect();
        let mut renumber = vec![NONE; t.rows.len()];
        for (k, &i) in live.iter().enumerate() {
            renumber[i] = k;
        }
        Ok(live
            .iter()
            .map(|&i| {
                let row = t.rows[i].clone();
                row.iter().map(|&target| renumber[t.rep(target)]).collect()
            })
            .collect())
    }
}
