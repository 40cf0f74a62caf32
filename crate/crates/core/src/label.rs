use std::fmt;

/// A parity label: a subset of logical indices, stored as a packed GF(2) vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    words: Vec<u64>,
}

fn words_for(cap: usize) -> usize {
    cap.div_ceil(64).max(1)
}

impl Label {
    pub fn empty(cap: usize) -> Self {
        Label { words: vec![0; words_for(cap)] }
    }

    pub fn single(cap: usize, i: usize) -> Self {
        let mut l = Self::empty(cap);
        l.flip(i);
        l
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(cap: usize, idx: I) -> Self {
        let mut l = Self::empty(cap);
        for i in idx {
            l.flip(i);
        }
        l
    }

    /// Number of indices this label can hold.
    pub fn capacity(&self) -> usize {
        self.words.len() * 64
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.capacity() && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// In-place symmetric difference.
    pub fn xor_assign(&mut self, other: &Label) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &Label) -> Label {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(k * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    /// Lowest index present, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// All labels of exactly `k` indices out of `0..n`.
pub fn k_body_labels(n: usize, k: usize) -> Vec<Label> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Label::from_indices(n, idx.iter().copied()));
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Binomial coefficient, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r.min(u64::MAX as u128) as u64
}
