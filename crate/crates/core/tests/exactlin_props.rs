use homext::exactlin::{snf, solve_mod, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Fraction-free Gaussian elimination (Bareiss); exact over the integers.
fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// The k-th determinantal divisor: gcd of all k x k minors.
fn determinantal_divisor(a: &[Vec<BigInt>], k: usize) -> BigInt {
    let cols = a.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in subsets(a.len(), k) {
        for cs in subsets(cols, k) {
            let minor: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
            g = g.gcd(&det(&minor));
        }
    }
    g
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(rows in matrix()) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let s = snf(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(det(&s.u.to_rows()).abs(), BigInt::one());
        prop_assert_eq!(det(&s.v.to_rows()).abs(), BigInt::one());
        let d = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides, "{:?}", d);
        }
        // d_1 ... d_k is the gcd of the k x k minors
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut prefix = BigInt::one();
        for (k, dk) in d.iter().enumerate() {
            prefix *= dk;
            prop_assert_eq!(&prefix, &determinantal_divisor(&big, k + 1));
        }
    }
}

fn vectors(n: u64, len: usize) -> Vec<Vec<u64>> {
    (0..n.pow(len as u32))
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let x = i % n;
                    i /= n;
                    x
                })
                .collect()
        })
        .collect()
}

fn lex_least_solution(a: &[Vec<u64>], b: &[u64], n: u64, cols: usize) -> Option<Vec<u64>> {
    let mut all: Vec<Vec<u64>> = vectors(n, cols)
        .into_iter()
        .filter(|x| a.iter().zip(b).all(|(row, &bi)| row.iter().zip(x).map(|(p, q)| p * q).sum::<u64>() % n == bi))
        .collect();
    all.sort();
    all.into_iter().next()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_mod_matches_exhaustive_search(
        n in 2u64..=8,
        shape in (1usize..=3, 1usize..=3),
        seed in prop::collection::vec(0u64..8, 9),
    ) {
        let (r, c) = shape;
        let a: Vec<Vec<u64>> = (0..r).map(|i| (0..c).map(|j| seed[i * 3 + j] % n).collect()).collect();
        let am = IntMatrix::from_rows(&a.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect::<Vec<_>>()).unwrap();
        for b in vectors(n, r) {
            let bb: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
            let got = solve_mod(&am, &bb, n).unwrap();
            let want = lex_least_solution(&a, &b, n, c);
            let got = got.map(|x| x.iter().map(|v| u64::try_from(v).unwrap()).collect::<Vec<_>>());
            prop_assert_eq!(got, want, "A = {:?}, b = {:?}, N = {}", a, b, n);
        }
    }
}

#[test]
fn smith_entries_grow_past_machine_words() {
    // entries near 2^40 whose minors overflow 64 bits
    let big = 1_i64 << 40;
    let a = IntMatrix::from_rows(&[vec![big, big + 1], vec![big - 1, big]]).unwrap();
    assert_eq!(snf(&a).diagonal(), vec![BigInt::one(), BigInt::one()]);
    let b = IntMatrix::from_rows(&[vec![big, 0], vec![0, big * 3]]).unwrap();
    assert_eq!(snf(&b).diagonal(), vec![BigInt::from(big), BigInt::from(big) * 3]);
}
