// Release gate: eleven end-to-end checks with explicit time budgets.
// Each test prints a single summary line so the suite output doubles
// as a report.

use num_integer::Integer;
use num_traits::Zero;
use orderforge::braids::{
    bpqr, fdtc_shift, full_twist_compose, hypothesis_check, Hypothesis, HypothesisFailure,
};
use orderforge::dynamics::PLCircleMap;
use orderforge::exact::poly::IntPoly;
use orderforge::exact::{q, Q, Z};
use orderforge::homology::{
    lifting_certificate, order_detection_certificate, second_cohomology, Detection, LiftOutcome,
    OrbifoldPresentation,
};
use orderforge::ordtree::CyclicOrderTree;
use orderforge::recal::{adjust_coprime, StarCalibration};
use orderforge::sampling::{random_homeo_fixing_zero, random_rotation_like, random_tree_file};
use orderforge::twobridge::arc::{definite_on_arc, lspace_obstruction_bound};
use orderforge::twobridge::rho::{rho_theta, rho_theta_at_pi_over};
use orderforge::twobridge::{alexander_polynomial, f_block, f_prime_block, EvenCf, Orientation};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

fn report(name: &str, t: Duration, budget: Duration) {
    assert!(
        t <= budget,
        "{name}: took {t:?}, budget {budget:?}"
    );
    println!("{name}: pass ({t:?}, budget {budget:?})");
}

#[test]
fn a01_recalibration_worked_example() {
    let start = Instant::now();
    let cal = StarCalibration::new(3, 2, 2).unwrap();
    assert_eq!(cal.a_prime, 5);
    assert_eq!(cal.b, -1);
    assert_eq!(cal.natural_rotation(), q(1, 3));
    assert_eq!(cal.recalibrated_rotation(), q(2, 3));
    report("a01 recalibration worked example", start.elapsed(), Duration::from_millis(1));
}

#[test]
fn a02_coprime_adjustment_exhaustive() {
    let start = Instant::now();
    let mut checked = 0u64;
    for n in 1u64..=50 {
        for a in 1..=n {
            if a.gcd(&n) != 1 {
                continue;
            }
            for delta in 1u64..=50 {
                let adjusted = adjust_coprime(a, n, delta).unwrap();
                assert_eq!(adjusted % n, a % n, "residue drift at a={a} n={n} delta={delta}");
                assert_eq!(
                    adjusted.gcd(&(n * delta)),
                    1,
                    "common factor left at a={a} n={n} delta={delta}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 30_000);
    report("a02 coprime adjustment exhaustive", start.elapsed(), Duration::from_secs(5));
}

/// All tag/degree/adjacency-compatible node bijections of a small tree,
/// found by backtracking over a BFS vertex ordering; capped so worst
/// cases stay cheap. The structural checks proper happen downstream in
/// check_automorphism.
fn candidate_bijections(
    adj: &[Vec<usize>],
    sig: &[(u8, usize)],
    step_cap: &mut usize,
    out_cap: usize,
) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut bfs = vec![0usize];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut qi = 0;
    while qi < bfs.len() {
        let v = bfs[qi];
        qi += 1;
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                bfs.push(u);
            }
        }
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found = Vec::new();
    fn go(
        pos: usize,
        bfs: &[usize],
        parent: &[usize],
        adj: &[Vec<usize>],
        sig: &[(u8, usize)],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut Vec<Vec<usize>>,
        step_cap: &mut usize,
        out_cap: usize,
    ) {
        if *step_cap == 0 || found.len() >= out_cap {
            return;
        }
        *step_cap -= 1;
        if pos == bfs.len() {
            found.push(image.clone());
            return;
        }
        let v = bfs[pos];
        let pool: Vec<usize> = if parent[v] == usize::MAX {
            (0..adj.len()).collect()
        } else {
            adj[image[parent[v]]].clone()
        };
        for w in pool {
            if used[w] || sig[w] != sig[v] {
                continue;
            }
            image[v] = w;
            used[w] = true;
            go(pos + 1, bfs, parent, adj, sig, image, used, found, step_cap, out_cap);
            used[w] = false;
            image[v] = usize::MAX;
        }
    }
    go(0, &bfs, &parent, adj, sig, &mut image, &mut used, &mut found, step_cap, out_cap);
    found
}

#[test]
fn a03_end_orders_satisfy_the_axioms_and_survive_automorphisms() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(03);
    let mut aut_checked = 0usize;
    for _ in 0..500 {
        let file = random_tree_file(&mut rng, 40);
        let tree = CyclicOrderTree::from_file(&file).unwrap();
        let order = tree.end_circular_order().unwrap();
        let l = order.len();
        // totality and antisymmetry on every triple
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    let v = order.eval_idx(i, j, k);
                    if i == j || j == k || i == k {
                        assert_eq!(v, 0);
                    } else {
                        assert!(v == 1 || v == -1);
                        assert_eq!(order.eval_idx(j, i, k), -v);
                        assert_eq!(order.eval_idx(j, k, i), v);
                    }
                }
            }
        }
        // coboundary vanishes on every quadruple
        for i in 0..l {
            for j in i + 1..l {
                for k in j + 1..l {
                    for m in k + 1..l {
                        let d = order.eval_idx(j, k, m) - order.eval_idx(i, k, m)
                            + order.eval_idx(i, j, m)
                            - order.eval_idx(i, j, k);
                        assert_eq!(d, 0, "coboundary {d} on quadruple");
                    }
                }
            }
        }
        // every accepted automorphism must preserve the end order
        let n = tree.node_count();
        let mut adj = vec![Vec::new(); n];
        let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for (a, b) in &file.edges {
            link(tree.node(a).unwrap(), tree.node(b).unwrap(), &mut adj);
        }
        // cluster tops hang off their stem without a raw edge
        for c in &file.clusters {
            let stem = tree.node(&c.stem).unwrap();
            for t in &c.tops {
                link(stem, tree.node(t).unwrap(), &mut adj);
            }
        }
        let sig: Vec<(u8, usize)> =
            (0..n).map(|v| (tree.tag(v) as u8, tree.degree(v))).collect();
        let mut steps = 30_000usize;
        for cand in candidate_bijections(&adj, &sig, &mut steps, 48) {
            let map: BTreeMap<String, String> = (0..n)
                .map(|v| (tree.node_id(v).to_string(), tree.node_id(cand[v]).to_string()))
                .collect();
            let Ok(leaf_pairs) = tree.check_automorphism(&map) else {
                continue;
            };
            aut_checked += 1;
            let perm: Vec<usize> = leaf_pairs
                .iter()
                .map(|(_, img)| order.index_of(img).unwrap())
                .collect();
            for i in 0..l {
                for j in i + 1..l {
                    for k in j + 1..l {
                        assert_eq!(
                            order.eval_idx(i, j, k),
                            order.eval_idx(perm[i], perm[j], perm[k]),
                            "automorphism broke the end order"
                        );
                    }
                }
            }
        }
    }
    assert!(aut_checked >= 500, "too few automorphisms exercised: {aut_checked}");
    report(
        "a03 end orders: axioms + automorphism invariance",
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn a04_translation_number_laws_on_random_maps() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(04);
    let budget = 2_000;
    for i in 0..200 {
        let (f, rho) = if i % 10 == 0 {
            // force some rotation number zero cases
            let f = random_homeo_fixing_zero(&mut rng, 5);
            (f, Q::zero())
        } else {
            random_rotation_like(&mut rng, 12)
        };
        let tau = f.translation_number(budget);
        assert_eq!(tau.exact(), Some(&rho), "not exact or wrong value");
        for p in -3i64..=3 {
            let expect = &rho * q(p, 1);
            let got = f.pow(p).translation_number(budget);
            assert_eq!(got.exact(), Some(&expect), "power law failed at p={p}");
        }
        let h = random_homeo_fixing_zero(&mut rng, 5);
        let conj = h.compose(&f).compose(&h.inverse());
        assert_eq!(conj.translation_number(budget).exact(), Some(&rho));
        assert_eq!(f.has_fixed_point(), rho.is_zero(), "fixed point iff zero failed");
    }
    report("a04 translation number laws", start.elapsed(), Duration::from_secs(10));
}

#[test]
fn a05_euler_cocycle_lift_for_the_triple_two_presentation() {
    let start = Instant::now();
    // w = y x y^-1 x^-1 y x y x^-1 y^-1 x y, relator w x w^-1 x^-1
    let w: Vec<(&str, i64)> = vec![
        ("y", 1), ("x", 1), ("y", -1), ("x", -1), ("y", 1), ("x", 1),
        ("y", 1), ("x", -1), ("y", -1), ("x", 1), ("y", 1),
    ];
    let mut relator: Vec<(String, i64)> = Vec::new();
    for &(g, e) in &w {
        relator.push((g.into(), e));
    }
    relator.push(("x".into(), 1));
    for &(g, e) in w.iter().rev() {
        relator.push((g.into(), -e));
    }
    relator.push(("x".into(), -1));
    let pres = OrbifoldPresentation {
        generators: vec!["x".into(), "y".into()],
        relators: vec![relator],
        orbifold_cells: vec![("x".into(), 7), ("y".into(), 7)],
    };
    let values = BTreeMap::from([("x".to_string(), 1i64), ("y".to_string(), 1i64)]);
    let outcome = lifting_certificate(&pres, 7, &values).unwrap();
    let LiftOutcome::Certified(cert) = outcome else {
        panic!("lift refused");
    };
    assert_eq!(cert.omega, vec![Z::zero(), Z::from(-1), Z::from(-1)]);
    assert_eq!(cert.eta["x"], Z::from(-1));
    assert_eq!(cert.eta["y"], Z::from(-1));
    // re-verify the coboundary equation by multiplication
    let eta_vec: Vec<Z> = pres.generators.iter().map(|g| cert.eta[g].clone()).collect();
    let lhs = pres.coboundary().unwrap().apply(&eta_vec);
    let rhs: Vec<Z> = cert.omega.iter().map(|v| v * Z::from(7)).collect();
    assert_eq!(lhs, rhs);
    report("a05 euler cocycle lift at n=7", start.elapsed(), Duration::from_secs(1));
}

/// Invariant factors of Z/n_1 + ... + Z/n_m by prime-power bucketing,
/// computed without any matrix algebra.
fn invariant_factors(ns: &[u64]) -> Vec<u64> {
    let mut buckets: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in ns {
        let mut n = n;
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                buckets.entry(p).or_default().push(e);
            }
            p += 1;
        }
        if n > 1 {
            buckets.entry(n).or_default().push(1);
        }
    }
    let depth = buckets.values().map(|v| v.len()).max().unwrap_or(0);
    for v in buckets.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut factors = Vec::new();
    for j in 0..depth {
        let mut d = 1u64;
        for (&p, es) in &buckets {
            if let Some(&e) = es.get(j) {
                d *= p.pow(e);
            }
        }
        if d > 1 {
            factors.push(d);
        }
    }
    factors.reverse();
    factors
}

#[test]
fn a06_second_cohomology_torsion_matches_the_cone_orders() {
    let start = Instant::now();
    let gens = ["x", "y", "z"];
    let commutator = |a: &str, b: &str| -> Vec<(String, i64)> {
        vec![(a.into(), 1), (b.into(), 1), (a.into(), -1), (b.into(), -1)]
    };
    let mut cases = 0usize;
    for m in 1usize..=3 {
        let mut orders = vec![1u64; m];
        loop {
            let pres = OrbifoldPresentation {
                generators: gens[..m].iter().map(|s| s.to_string()).collect(),
                relators: match m {
                    1 => vec![],
                    2 => vec![commutator("x", "y")],
                    _ => vec![commutator("x", "y"), commutator("y", "z")],
                },
                orbifold_cells: gens[..m]
                    .iter()
                    .zip(&orders)
                    .map(|(g, &n)| (g.to_string(), n))
                    .collect(),
            };
            let h2 = second_cohomology(&pres).unwrap();
            let expect: Vec<Z> = invariant_factors(&orders).into_iter().map(Z::from).collect();
            assert_eq!(h2.torsion, expect, "torsion mismatch for cone orders {orders:?}");
            cases += 1;
            // odometer over the cone orders
            let mut i = 0;
            while i < m && orders[i] == 12 {
                orders[i] = 1;
                i += 1;
            }
            if i == m {
                break;
            }
            orders[i] += 1;
        }
    }
    assert_eq!(cases, 12 + 144 + 1728);
    report("a06 second cohomology torsion", start.elapsed(), Duration::from_secs(5));
}

#[test]
fn a07_alexander_polynomials_of_both_block_families() {
    let start = Instant::now();
    for k in 1u64..=8 {
        // (t^{2k} - 1) / (t + 1)
        let mut num = vec![0i64; 2 * k as usize + 1];
        num[0] = -1;
        num[2 * k as usize] = 1;
        let target = IntPoly::from_i64(&num).exact_div_poly(&IntPoly::from_i64(&[1, 1]));
        assert_eq!(alexander_polynomial(&f_block(k)), target, "torus block k={k}");
    }
    for l in 1u64..=8 {
        // (t - 1) ((l+1) - 2l t + (l+1) t^2), up to sign and powers of t
        let li = l as i64;
        let target = IntPoly::from_i64(&[-1, 1])
            .clone()
            * IntPoly::from_i64(&[li + 1, -2 * li, li + 1]);
        let got = alexander_polynomial(&f_prime_block(l));
        let normalize = |p: &IntPoly| p.shift_down(p.order_at_zero()).leading_positive();
        assert_eq!(normalize(&got), normalize(&target), "plumbing block l={l}");
    }
    report("a07 alexander block formulas", start.elapsed(), Duration::from_secs(5));
}

#[test]
fn a08_definiteness_grid_and_obstruction_bound() {
    let start = Instant::now();
    for k in 2u64..=12 {
        for n in 3u64..=12 {
            let expect = k * (n - 2) < n;
            let got = definite_on_arc(&f_block(k), n).unwrap();
            assert_eq!(got.definite, expect, "definiteness at k={k} n={n}");
        }
    }
    for cs in [vec![2, 2, 2], vec![2, 2, 2, 2, 2], vec![2, 2, 2, 2, 2, 2, 2]] {
        let cf = EvenCf::new(cs.clone(), Orientation::Reversed).unwrap();
        let bound = lspace_obstruction_bound(&cf).unwrap();
        assert_eq!(bound.n, 6, "bound for {cs:?}");
    }
    report("a08 definiteness grid + bound 6", start.elapsed(), Duration::from_secs(5));
}

#[test]
fn a09_representation_family_residuals_and_sign() {
    let start = Instant::now();
    let tol = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(09);
    for _ in 0..100 {
        let theta: f64 = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        let a = rho_theta(theta).unwrap();
        assert!(a.relation_residual <= tol, "relation residual {} at {theta}", a.relation_residual);
        assert!(a.closed_form_residual <= tol, "closed form {} at {theta}", a.closed_form_residual);
        assert!(a.symmetry_residual <= tol, "symmetry {} at {theta}", a.symmetry_residual);
    }
    for n in 7u64..=24 {
        let a = rho_theta_at_pi_over(n).unwrap();
        assert!(a.relation_residual <= tol && a.closed_form_residual <= tol);
        assert!(a.symmetry_residual <= tol);
        assert!(a.s < 0.0, "s({n}) = {} not negative", a.s);
        assert!(a.conjugate_to_real);
    }
    report("a09 representation residuals", start.elapsed(), Duration::from_secs(2));
}

#[test]
fn a10_twist_ledger_and_hypothesis_flags() {
    let start = Instant::now();
    let (_, rec) = bpqr(2, 3, 2);
    for k in -3i64..=3 {
        let shifted = fdtc_shift(&rec, k);
        assert_eq!(shifted.value, &rec.value + q(k, 1));
        assert_eq!(shifted.word.letters(), full_twist_compose(&rec.word, k).letters());
    }
    let one = q(1, 1);
    let r1 = hypothesis_check(&one, &Hypothesis::AvoidsZeroAndReciprocals);
    assert!(!r1.passes);
    assert_eq!(r1.failure, Some(HypothesisFailure::ReciprocalOfInteger { m: 1 }));
    let r2 = hypothesis_check(&one, &Hypothesis::ExceedsUnitMagnitude);
    assert!(!r2.passes);
    assert_eq!(r2.failure, Some(HypothesisFailure::MagnitudeAtMostOne));
    report("a10 twist ledger + hypothesis flags", start.elapsed(), Duration::from_millis(1));
}

#[test]
fn a11_order_detection_for_rational_rotation_pairs() {
    let start = Instant::now();
    let mu = PLCircleMap::from_pairs(&[(q(0, 1), q(0, 1))]).unwrap();
    for n in 2i64..=12 {
        for shift in -2i64..=2 {
            let alpha =
                PLCircleMap::from_pairs(&[(q(0, 1), q(1, n) + q(shift, 1))]).unwrap();
            match order_detection_certificate(&mu, &alpha, 64) {
                Detection::Detected { rot_mu, rot_alpha, lift_shift, fractional } => {
                    assert_eq!(rot_mu, q(0, 1));
                    assert_eq!(rot_alpha, q(1, n) + q(shift, 1));
                    assert!(!rot_alpha.is_zero());
                    assert_eq!(lift_shift, Z::from(shift));
                    assert_eq!(fractional, q(1, n));
                }
                other => panic!("expected detection at n={n} shift={shift}, got {other:?}"),
            }
        }
    }
    report("a11 order detection certificates", start.elapsed(), Duration::from_secs(5));
}
