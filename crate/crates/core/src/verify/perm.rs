//! Minimal permutations on `{0, .., n-1}`.

use thiserror::Error;

#[derive(Error, Clone, PartialEq, Eq, Debug)]
#[error("image list is not a permutation of 0..{0}")]
pub struct NotAPermutation(pub usize);

/// A permutation stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm, NotAPermutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if (v as usize) >= n || seen[v as usize] {
                return Err(NotAPermutation(n));
            }
            seen[v as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    /// Left-to-right composition: `(self.then(g))(p) = g(self(p))`, so
    /// evaluating a word letter by letter is a homomorphism.
    pub fn then(&self, g: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&p| g.apply(p)).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Order of the permutation: least common multiple of its cycle lengths.
    pub fn order(&self) -> u64 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut order: u64 = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    /// All permutations of degree `n` in lexicographic image order. Intended
    /// for small `n` only (exhaustive search caps at degree 4).
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<u32> = Vec::new();
        let mut used = vec![false; n];
        fn rec(n: usize, current: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
            if current.len() == n {
                out.push(Perm {
                    images: current.clone(),
                });
                return;
            }
            for v in 0..n as u32 {
                if !used[v as usize] {
                    used[v as usize] = true;
                    current.push(v);
                    rec(n, current, used, out);
                    current.pop();
                    used[v as usize] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }

    /// Uniform random permutation (Fisher–Yates).
    pub fn random<R: rand::Rng>(rng: &mut R, n: usize) -> Perm {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Perm { images }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
