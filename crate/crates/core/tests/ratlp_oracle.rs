//! Cross-checks the simplex against a brute-force vertex enumerator on
//! random boxed programs: every optimum must match the best feasible vertex,
//! and infeasibility must coincide with the absence of feasible vertices.

#![allow(clippy::needless_range_loop)] // index-heavy Gaussian elimination

use fairdiv_core::rational::{int, Rational};
use fairdiv_core::ratlp::{solve_max, Constraint, LinearProgram, LpOutcome, Relation, VarBounds};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Solves the square rational system `a x = b` by Gaussian elimination;
/// `None` when singular.
fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &pivot;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

fn feasible(lp: &LinearProgram, point: &[Rational]) -> bool {
    for c in &lp.constraints {
        let lhs: Rational = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        };
        if !ok {
            return false;
        }
    }
    lp.bounds.iter().zip(point).all(|(b, x)| {
        b.lower.as_ref().is_none_or(|l| x >= l) && b.upper.as_ref().is_none_or(|u| x <= u)
    })
}

/// Best objective value over all vertices of the (boxed, hence bounded)
/// feasible region: intersects every choice of `dim` hyperplanes taken from
/// the constraints-as-equalities and the active bounds.
fn best_vertex_value(lp: &LinearProgram) -> Option<Rational> {
    let dim = lp.objective.len();
    let mut planes: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in &lp.constraints {
        planes.push((c.coeffs.clone(), c.rhs.clone()));
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        for bound in [&b.lower, &b.upper].into_iter().flatten() {
            let mut coeffs = vec![Rational::zero(); dim];
            coeffs[j] = int(1);
            planes.push((coeffs, bound.clone()));
        }
    }

    let mut best: Option<Rational> = None;
    let mut choice = vec![0usize; dim];
    visit_subsets(planes.len(), dim, &mut choice, 0, 0, &mut |subset| {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| planes[i].1.clone()).collect();
        if let Some(point) = solve_square(&a, &b) {
            if feasible(lp, &point) {
                let value: Rational = lp
                    .objective
                    .iter()
                    .zip(&point)
                    .map(|(c, x)| c * x)
                    .sum();
                if best.as_ref().is_none_or(|b| value > *b) {
                    best = Some(value);
                }
            }
        }
    });
    best
}

fn visit_subsets(
    total: usize,
    size: usize,
    choice: &mut Vec<usize>,
    depth: usize,
    from: usize,
    callback: &mut impl FnMut(&[usize]),
) {
    if depth == size {
        callback(choice);
        return;
    }
    for i in from..total {
        choice[depth] = i;
        visit_subsets(total, size, choice, depth + 1, i + 1, callback);
    }
}

fn random_program(rng: &mut ChaCha20Rng) -> LinearProgram {
    let dim = rng.random_range(2..=4usize);
    let n_constraints = rng.random_range(0..=6usize);
    let objective: Vec<Rational> = (0..dim).map(|_| int(rng.random_range(-3..=3))).collect();
    let constraints: Vec<Constraint> = (0..n_constraints)
        .map(|_| {
            let coeffs: Vec<Rational> = (0..dim).map(|_| int(rng.random_range(-3..=3))).collect();
            let relation = match rng.random_range(0..6u32) {
                0 => Relation::Ge,
                1 => Relation::Eq,
                _ => Relation::Le,
            };
            // A zero right-hand side now and then keeps degeneracy in play.
            let rhs = if rng.random_range(0..4u32) == 0 {
                int(0)
            } else {
                int(rng.random_range(-4..=6))
            };
            Constraint::new(coeffs, relation, rhs)
        })
        .collect();
    let bounds = (0..dim)
        .map(|_| {
            let lower = int(rng.random_range(-2..=0));
            let upper = int(rng.random_range(1..=5));
            VarBounds::between(lower, upper)
        })
        .collect();
    LinearProgram {
        objective,
        constraints,
        bounds,
    }
}

#[test]
fn simplex_agrees_with_vertex_enumeration() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5107_3a11);
    let mut optima = 0usize;
    let mut infeasible = 0usize;
    for round in 0..250 {
        let lp = random_program(&mut rng);
        let outcome = solve_max(&lp).unwrap();
        let oracle = best_vertex_value(&lp);
        match (&outcome, &oracle) {
            (LpOutcome::Optimal { value, .. }, Some(best)) => {
                assert_eq!(value, best, "round {round}: {lp:?}");
                optima += 1;
            }
            (LpOutcome::Infeasible, None) => infeasible += 1,
            _ => panic!("round {round}: simplex said {outcome:?}, oracle said {oracle:?}\n{lp:?}"),
        }
    }
    // Both verdicts must actually occur for the comparison to mean anything.
    assert!(optima > 50, "only {optima} optimal programs sampled");
    assert!(infeasible > 10, "only {infeasible} infeasible programs sampled");
}

/// Rebuilds the CEEI margin program from its definition (no pruning, no
/// implied-bound reasoning) and solves it by vertex enumeration. The
/// production `ceei_test` must agree on every allocation: prices exist iff
/// the best margin exceeds the feasibility shift. This guards the negative
/// verdicts, which the certificate check cannot see.
#[test]
fn ceei_verdicts_agree_with_vertex_enumeration() {
    use fairdiv_core::allocation::enumerate_allocations;
    use fairdiv_core::fairness::ceei_test;
    use fairdiv_core::generate::{generate, GeneratorConfig, Model};
    use fairdiv_core::Instance;

    fn margin_lp(inst: &Instance, alloc: &fairdiv_core::Allocation) -> LinearProgram {
        let m = inst.m();
        let one = int(1);
        let mut constraints = Vec::new();
        for agent in 0..inst.n() {
            let bundle: Vec<usize> = alloc.bundle_iter(agent).collect();
            if !bundle.is_empty() {
                let mut coeffs = vec![Rational::zero(); m + 1];
                for &k in &bundle {
                    coeffs[k] = one.clone();
                }
                constraints.push(Constraint::new(coeffs, Relation::Le, one.clone()));
            }
            let own = inst.utility(agent, bundle.iter().copied()).unwrap();
            for mask in 1usize..(1 << m) {
                let objects: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
                if inst.utility(agent, objects.iter().copied()).unwrap() > own {
                    let mut coeffs = vec![Rational::zero(); m + 1];
                    for &k in &objects {
                        coeffs[k] = -one.clone();
                    }
                    coeffs[m] = one.clone();
                    constraints.push(Constraint::new(coeffs, Relation::Le, one.clone()));
                }
            }
        }
        let mut objective = vec![Rational::zero(); m + 1];
        objective[m] = one.clone();
        let mut bounds = vec![VarBounds::between(int(0), int(1)); m];
        bounds.push(VarBounds::between(int(0), int(3)));
        LinearProgram {
            objective,
            constraints,
            bounds,
        }
    }

    let mut positives = 0usize;
    for (agents, seeds) in [(2usize, vec![21u64, 22, 23, 25, 26]), (3, vec![24])] {
        for seed in seeds {
            let config = GeneratorConfig {
                model: Model::Uniform,
                agents,
                objects: 3,
                weight_cap: 9,
                seed,
                count: 1,
            };
            let inst = generate(&config).unwrap().remove(0);
            for alloc in enumerate_allocations(&inst, 1000).unwrap() {
                let lp = margin_lp(&inst, &alloc);
                let best = best_vertex_value(&lp).expect("margin program is feasible");
                let is_ceei = ceei_test(&inst, &alloc, 1_000_000).unwrap().is_some();
                assert_eq!(is_ceei, best > int(2), "{inst} {alloc}: best margin {best}");
                // The simplex must also hit the same optimum on this shape.
                match solve_max(&lp).unwrap() {
                    LpOutcome::Optimal { value, .. } => assert_eq!(value, best),
                    other => panic!("margin program not optimal: {other:?}"),
                }
                if is_ceei {
                    positives += 1;
                }
            }
        }
    }
    assert!(positives >= 4, "only {positives} CEEI allocations sampled");
}

#[test]
fn degenerate_programs_terminate_and_match_the_oracle() {
    // All right-hand sides zero: the origin is the only candidate and every
    // pivot is degenerate, which is where naive pivot rules cycle.
    let mut rng = ChaCha20Rng::seed_from_u64(0xdead_0001);
    for _ in 0..60 {
        let mut lp = random_program(&mut rng);
        for c in &mut lp.constraints {
            c.rhs = int(0);
        }
        for b in &mut lp.bounds {
            b.lower = Some(int(0));
        }
        let outcome = solve_max(&lp).unwrap();
        let oracle = best_vertex_value(&lp);
        match (&outcome, &oracle) {
            (LpOutcome::Optimal { value, .. }, Some(best)) => assert_eq!(value, best),
            (LpOutcome::Infeasible, None) => {}
            _ => panic!("simplex said {outcome:?}, oracle said {oracle:?}\n{lp:?}"),
        }
    }
}
