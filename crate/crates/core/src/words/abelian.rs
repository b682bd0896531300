use num_integer::Integer;

use super::{GeneratorSet, Word};

/// Integer linear functionals on exponent-sum vectors that vanish on every
/// relator: homomorphisms `G → Z`, used to bucket elements before calling
/// the word problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariant {
    /// `functionals[j][i]` is the value of functional `j` on base generator `i`.
    functionals: Vec<Vec<i64>>,
}

impl AbelianInvariant {
    pub fn new(gens: &GeneratorSet, relators: &[Word]) -> Self {
        let rank = gens.rank();
        let mut rows: Vec<Vec<i64>> = relators.iter().map(|r| exponent_sums(gens, r)).collect();
        for l in gens.letters() {
            if gens.is_self_inverse(l) {
                let mut v = vec![0; rank];
                v[gens.base_of(l).0] = 2;
                rows.push(v);
            }
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
        Self {
            functionals: integer_nullspace(&rows, rank),
        }
    }

    pub fn evaluate(&self, gens: &GeneratorSet, w: &Word) -> Vec<i64> {
        let e = exponent_sums(gens, w);
        self.functionals
            .iter()
            .map(|f| f.iter().zip(&e).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.functionals.len()
    }
}

pub(crate) fn exponent_sums(gens: &GeneratorSet, w: &Word) -> Vec<i64> {
    let mut v = vec![0i64; gens.rank()];
    for &l in w.letters() {
        let (b, s) = gens.base_of(l);
        v[b] += s as i64;
    }
    v
}

/// Integer basis (not necessarily saturated) of `{f : rows · f = 0}`.
fn integer_nullspace(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    // reduced row echelon form over the rationals, kept integral by row scaling
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let (a, b) = (m[row][col], m[i][col]);
                let l = a.lcm(&b);
                let (fa, fb) = (l / a, l / b);
                for k in 0..n {
                    m[i][k] = m[i][k] * fb - m[row][k] * fa;
                }
                let g = m[i].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        // f[free] = L, f[pivot_r] = -m[r][free] * L / m[r][pivot_r]
        let l = pivots
            .iter()
            .enumerate()
            .fold(1i128, |acc, (r, &pc)| acc.lcm(&m[r][pc].abs()));
        let mut f = vec![0i128; n];
        f[free] = l;
        for (r, &pc) in pivots.iter().enumerate() {
            f[pc] = -m[r][free] * l / m[r][pc];
        }
        let g = f.iter().fold(0i128, |g, &x| g.gcd(&x));
        basis.push(f.into_iter().map(|x| (x / g.max(1)) as i64).collect());
    }
    basis
}
