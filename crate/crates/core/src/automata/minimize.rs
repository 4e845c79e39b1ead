//! Hopcroft partition refinement over a dense transition table, followed by a
//! canonical breadth-first renumbering. Two automata with the same behaviour
//! and the same labelling therefore minimize to identical tables.

/// A total deterministic machine: `trans[s * letters + a]` is the successor of
/// `s` on letter `a`, and `labels[s]` is what must be preserved (acceptance or
/// output).
pub(crate) struct Table<'a> {
    pub letters: usize,
    pub trans: &'a [u32],
    pub labels: &'a [u32],
    pub initial: u32,
}

pub(crate) struct Minimal {
    pub trans: Vec<u32>,
    pub labels: Vec<u32>,
}

/// Refinable partition of `0..n` in the style of Valmari and Lehtinen.
struct Partition {
    elems: Vec<u32>,
    loc: Vec<u32>,
    set_of: Vec<u32>,
    first: Vec<u32>,
    end: Vec<u32>,
    mid: Vec<u32>,
    touched: Vec<u32>,
}

impl Partition {
    fn new(labels: &[u32]) -> Self {
        let n = labels.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&s| labels[s as usize]);
        let mut loc = vec![0; n];
        let mut set_of = vec![0; n];
        let (mut first, mut end) = (Vec::new(), Vec::new());
        for (i, &s) in elems.iter().enumerate() {
            if i == 0 || labels[s as usize] != labels[elems[i - 1] as usize] {
                if i > 0 {
                    end.push(i as u32);
                }
                first.push(i as u32);
            }
            loc[s as usize] = i as u32;
            set_of[s as usize] = first.len() as u32 - 1;
        }
        if n > 0 {
            end.push(n as u32);
        }
        let mid = first.clone();
        Partition {
            elems,
            loc,
            set_of,
            first,
            end,
            mid,
            touched: Vec::new(),
        }
    }

    fn sets(&self) -> usize {
        self.first.len()
    }

    fn size(&self, b: usize) -> usize {
        (self.end[b] - self.first[b]) as usize
    }

    fn mark(&mut self, s: u32) {
        let b = self.set_of[s as usize] as usize;
        let i = self.loc[s as usize];
        let m = self.mid[b];
        if i < m {
            return;
        }
        let other = self.elems[m as usize];
        self.elems.swap(i as usize, m as usize);
        self.loc[s as usize] = m;
        self.loc[other as usize] = i;
        if m == self.first[b] {
            self.touched.push(b as u32);
        }
        self.mid[b] = m + 1;
    }

    /// Splits every touched set into its marked and unmarked parts, calling
    /// `on_split(old, new)` for each proper split.
    fn split(&mut self, mut on_split: impl FnMut(usize, usize, &Self)) {
        while let Some(b) = self.touched.pop() {
            let b = b as usize;
            if self.mid[b] == self.end[b] {
                self.mid[b] = self.first[b];
                continue;
            }
            let nb = self.first.len();
            self.first.push(self.first[b]);
            self.end.push(self.mid[b]);
            self.mid.push(self.first[b]);
            self.first[b] = self.mid[b];
            for i in self.first[nb]..self.end[nb] {
                self.set_of[self.elems[i as usize] as usize] = nb as u32;
            }
            on_split(b, nb, self);
        }
    }
}

/// States reachable from `initial`, in breadth-first order.
pub(crate) fn reachable(letters: usize, trans: &[u32], initial: u32) -> Vec<u32> {
    let n = trans.len() / letters.max(1);
    let mut seen = vec![false; n];
    let mut order = vec![initial];
    seen[initial as usize] = true;
    let mut head = 0;
    while head < order.len() {
        let s = order[head] as usize;
        head += 1;
        for &t in &trans[s * letters..(s + 1) * letters] {
            if !seen[t as usize] {
                seen[t as usize] = true;
                order.push(t);
            }
        }
    }
    order
}

pub(crate) fn minimize(table: &Table) -> Minimal {
    let k = table.letters;
    // Restrict to reachable states and renumber them densely.
    let order = reachable(k, table.trans, table.initial);
    let n = order.len();
    let mut dense = vec![u32::MAX; table.labels.len()];
    for (i, &s) in order.iter().enumerate() {
        dense[s as usize] = i as u32;
    }
    let mut trans = Vec::with_capacity(n * k);
    let mut labels = Vec::with_capacity(n);
    for &s in &order {
        let s = s as usize;
        labels.push(table.labels[s]);
        trans.extend(table.trans[s * k..(s + 1) * k].iter().map(|&t| dense[t as usize]));
    }

    // Inverse transitions grouped by (target, letter).
    let mut offsets = vec![0u32; n * k + 1];
    for s in 0..n {
        for a in 0..k {
            offsets[trans[s * k + a] as usize * k + a + 1] += 1;
        }
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut sources = vec![0u32; n * k];
    let mut fill = offsets.clone();
    for s in 0..n {
        for a in 0..k {
            let key = trans[s * k + a] as usize * k + a;
            sources[fill[key] as usize] = s as u32;
            fill[key] += 1;
        }
    }

    let mut part = Partition::new(&labels);
    let mut pending: Vec<usize> = (0..part.sets()).collect();
    let mut in_pending = vec![true; part.sets()];
    let mut splitter = Vec::new();
    while let Some(b) = pending.pop() {
        in_pending[b] = false;
        splitter.clear();
        splitter.extend_from_slice(&part.elems[part.first[b] as usize..part.end[b] as usize]);
        for a in 0..k {
            for &t in &splitter {
                let key = t as usize * k + a;
                for &s in &sources[offsets[key] as usize..offsets[key + 1] as usize] {
                    part.mark(s);
                }
            }
            part.split(|old, new, p| {
                in_pending.push(false);
                if in_pending[old] {
                    pending.push(new);
                    in_pending[new] = true;
                } else {
                    let smaller = if p.size(new) <= p.size(old) { new } else { old };
                    pending.push(smaller);
                    in_pending[smaller] = true;
                }
            });
        }
    }

    // Canonical numbering: breadth-first from the initial class, letters in order.
    let classes = part.sets();
    let mut id = vec![u32::MAX; classes];
    let mut queue = vec![part.set_of[0] as usize];
    id[queue[0]] = 0;
    let mut head = 0;
    let mut out_trans = Vec::with_capacity(classes * k);
    let mut out_labels = Vec::with_capacity(classes);
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        let rep = part.elems[part.first[c] as usize] as usize;
        out_labels.push(labels[rep]);
        for a in 0..k {
            let tc = part.set_of[trans[rep * k + a] as usize] as usize;
            if id[tc] == u32::MAX {
                id[tc] = queue.len() as u32;
                queue.push(tc);
            }
            out_trans.push(id[tc]);
        }
    }
    Minimal {
        trans: out_trans,
        labels: out_labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_equivalent_states() {
        // Parity of ones, written with four states; two are redundant copies.
        let trans = [2, 1, 3, 0, 0, 3, 1, 2];
        let labels = [0, 1, 0, 1];
        let m = minimize(&Table {
            letters: 2,
            trans: &trans,
            labels: &labels,
            initial: 0,
        });
        assert_eq!(m.labels.len(), 2);
        assert_eq!(m.trans, vec![0, 1, 1, 0]);
        assert_eq!(m.labels, vec![0, 1]);
    }

    #[test]
    fn drops_unreachable_and_is_canonical() {
        // state 2 unreachable; initial is 1
        let trans = [0, 0, 1, 0, 2, 2];
        let labels = [1, 0, 5];
        let m = minimize(&Table {
            letters: 2,
            trans: &trans,
            labels: &labels,
            initial: 1,
        });
        assert_eq!(m.labels, vec![0, 1]);
        assert_eq!(m.trans, vec![0, 1, 1, 1]);
    }

    #[test]
    fn distinguishes_by_depth() {
        // A chain where only the last state is labelled: nothing merges.
        let n = 6;
        let mut trans = Vec::new();
        for s in 0..n {
            let t = (s + 1).min(n - 1) as u32;
            trans.extend([t, t]);
        }
        let mut labels = vec![0; n];
        labels[n - 1] = 1;
        let m = minimize(&Table {
            letters: 2,
            trans: &trans,
            labels: &labels,
            initial: 0,
        });
        assert_eq!(m.labels.len(), n);
    }
}
