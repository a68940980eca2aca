//! Acceptance checks, one verdict line per criterion.
//!
//! Runs without the libtest harness so the verdicts are always printed:
//! `cargo test -p liecg-cli --test acceptance`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use liecg::irrep::{scp_zero_weights, Irrep};
use liecg::liealg::LieAlgebra;
use liecg::tensor::{product_scp, Decomposition};
use liecg::{FieldElem, Rational, SqrtSum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn lie(args: &[&str]) -> Result<String, String> {
    let mut argv = vec!["lie".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = liecg_cli::run(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!("`lie {}` exited {code}: {}", args.join(" "), String::from_utf8_lossy(&err)));
    }
    Ok(String::from_utf8(out).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn squash(s: &str) -> Vec<String> {
    s.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect()
}

fn f(s: &str) -> FieldElem {
    s.parse().unwrap()
}

fn irrep(la: LieAlgebra, hw: &[i32]) -> Arc<Irrep> {
    Arc::new(Irrep::new_generic(la, hw).unwrap())
}

fn label_of(r: &Irrep, ket: &str) -> u32 {
    r.kets().iter().position(|k| k.to_string() == ket).expect("ket exists") as u32 + 1
}

const SU3_OCTET: &str = "
    Lie algebra   :   SU(3)
    ==================================
    Highest weight:   (1,1)
    Dim. of irrep :   8
    ==================================
    1, Lev:0, Deg:1  (1,1),-2  (0,0)
    2, Lev:1, Deg:1  (2,-1),-1  (0,1)
    3, Lev:1, Deg:1  (-1,2),-1  (1,0)
    4, Lev:2, Deg:2  (0,0),0  (1,1)
    6, Lev:3, Deg:1  (1,-2),1  (1,2)
    7, Lev:3, Deg:1  (-2,1),1  (2,1)
    8, Lev:4, Deg:1  (-1,-1),2  (2,2)
";

const E6_27: &str = "
    Lie algebra   :   E6
    ==================================
    Highest weight:   (1,0,0,0,0,0)
    Dim. of irrep :   27
    ==================================
    1, Lev:0, Deg:1  (1,0,0,0,0,0),-1  (0,0,0,0,0,0)
    2, Lev:1, Deg:1  (-1,1,0,0,0,0),-1  (1,0,0,0,0,0)
    3, Lev:2, Deg:1  (0,-1,1,0,0,0),-1  (1,1,0,0,0,0)
    4, Lev:3, Deg:1  (0,0,-1,1,0,1),-1  (1,1,1,0,0,0)
    5, Lev:4, Deg:1  (0,0,0,1,0,-1),0  (1,1,1,0,0,1)
    6, Lev:4, Deg:1  (0,0,0,-1,1,1),-1  (1,1,1,1,0,0)
    7, Lev:5, Deg:1  (0,0,1,-1,1,-1),0  (1,1,1,1,0,1)
    8, Lev:5, Deg:1  (0,0,0,0,-1,1),-1  (1,1,1,1,1,0)
    9, Lev:6, Deg:1  (0,0,1,0,-1,-1),0  (1,1,1,1,1,1)
    10, Lev:6, Deg:1  (0,1,-1,0,1,0),0  (1,1,2,1,0,1)
    11, Lev:7, Deg:1  (0,1,-1,1,-1,0),0  (1,1,2,1,1,1)
    12, Lev:7, Deg:1  (1,-1,0,0,1,0),0  (1,2,2,1,0,1)
    13, Lev:8, Deg:1  (0,1,0,-1,0,0),0  (1,1,2,2,1,1)
    14, Lev:8, Deg:1  (1,-1,0,1,-1,0),0  (1,2,2,1,1,1)
    15, Lev:8, Deg:1  (-1,0,0,0,1,0),0  (2,2,2,1,0,1)
    16, Lev:9, Deg:1  (1,-1,1,-1,0,0),0  (1,2,2,2,1,1)
    17, Lev:9, Deg:1  (-1,0,0,1,-1,0),0  (2,2,2,1,1,1)
    18, Lev:10, Deg:1  (1,0,-1,0,0,1),0  (1,2,3,2,1,1)
    19, Lev:10, Deg:1  (-1,0,1,-1,0,0),0  (2,2,2,2,1,1)
    20, Lev:11, Deg:1  (1,0,0,0,0,-1),1  (1,2,3,2,1,2)
    21, Lev:11, Deg:1  (-1,1,-1,0,0,1),0  (2,2,3,2,1,1)
    22, Lev:12, Deg:1  (-1,1,0,0,0,-1),1  (2,2,3,2,1,2)
    23, Lev:12, Deg:1  (0,-1,0,0,0,1),0  (2,3,3,2,1,1)
    24, Lev:13, Deg:1  (0,-1,1,0,0,-1),1  (2,3,3,2,1,2)
    25, Lev:14, Deg:1  (0,0,-1,1,0,0),1  (2,3,4,2,1,2)
    26, Lev:15, Deg:1  (0,0,0,-1,1,0),1  (2,3,4,3,1,2)
    27, Lev:16, Deg:1  (0,0,0,0,-1,0),1  (2,3,4,3,2,2)
";

fn transcripts() -> Check {
    for (args, expect) in [
        (&["-su", "3", "-rep", "11"][..], SU3_OCTET),
        (&["-e6", "-rep", "100000"][..], E6_27),
    ] {
        let t = Instant::now();
        let out = lie(args)?;
        let took = t.elapsed();
        ensure(squash(&out) == squash(expect), || format!("`{}` differs:\n{out}", args.join(" ")))?;
        ensure(took < Duration::from_secs(1), || format!("`{}` took {took:?}", args.join(" ")))?;
    }
    Ok("SU(3) 8 and E6 27 listings match field for field".into())
}

fn worked_example() -> Check {
    let la = LieAlgebra::A(2);
    let (l, r) = (irrep(la, &[1, 0]), irrep(la, &[0, 1]));
    let mut d = Decomposition::new(l.clone(), r.clone()).map_err(|e| e.to_string())?;
    d.decompose().map_err(|e| e.to_string())?;
    let hws: Vec<&[i32]> = d.found().iter().map(|p| p.hw()).collect();
    ensure(hws == [&[1, 1][..], &[0, 0][..]], || format!("found {hws:?}"))?;
    let singlet = d.found()[1].hw_state();
    let pairs = [
        ("(1,0,)1", "(-1,0,)1", 1),
        ("(-1,1,)1", "(1,-1,)1", -1),
        ("(0,-1,)1", "(0,1,)1", 1),
    ];
    let c = f("1/3*sqrt(3)");
    let sign = singlet.coeff(&(label_of(&l, pairs[0].0), label_of(&r, pairs[0].1))).signum();
    ensure(singlet.len() == 3, || format!("singlet has {} terms", singlet.len()))?;
    for (a, b, s) in pairs {
        let got = singlet.coeff(&(label_of(&l, a), label_of(&r, b)));
        let want = c.scale(&Rational::from_int((s * sign) as i64));
        ensure(got == want, || format!("coefficient of {a}{b} is {got}"))?;
    }
    let dump = lie(&["-su", "3", "--decompose", "10 x 01", "--dump-singlet"])?;
    ensure(dump.matches("1/3*sqrt(3)").count() == 3, || dump.clone())?;
    Ok("singlet = (+1,-1,+1)/sqrt(3)".into())
}

fn e6_case() -> Check {
    let la = LieAlgebra::E6;
    let (l, r) = (irrep(la, &[1, 0, 0, 0, 0, 0]), irrep(la, &[0, 0, 0, 0, 1, 0]));
    let mut d = Decomposition::new(l.clone(), r.clone()).map_err(|e| e.to_string())?;
    d.decompose().map_err(|e| e.to_string())?;
    let dims: Vec<usize> = d.found().iter().map(|p| p.dim()).collect();
    ensure(dims == [650, 78, 1] && d.check_dims(), || format!("dims {dims:?}"))?;
    let data = d.found()[0].prepare(&l, &r).map_err(|e| e.to_string())?;
    let i650 = Irrep::new_imported(&data).map_err(|e| e.to_string())?;
    let mut labels: Vec<u32> = (1..=650).collect();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(650));
    let sample = &labels[..33];
    i650.verify_consistency(sample.iter().copied())
        .map_err(|e| e.to_string())?;
    Ok(format!("650+78+1, imported 650 consistent on {} sampled states", sample.len()))
}

fn peak_rss_mb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024)
}

fn e8_case() -> Check {
    let la = LieAlgebra::E8;
    let adj = irrep(la, &[0, 0, 0, 0, 0, 0, 1, 0]);
    let mut d = Decomposition::new(adj.clone(), adj.clone()).map_err(|e| e.to_string())?;
    d.decompose().map_err(|e| e.to_string())?;
    let dims: Vec<usize> = d.found().iter().map(|p| p.dim()).collect();
    ensure(dims == [27000, 30380, 3875, 248, 1] && d.check_dims(), || format!("dims {dims:?}"))?;
    let singlet = d.found()[4].hw_state();
    let leading = [
        ("(0,0,0,0,0,0,1,0,)1", "(0,0,0,0,0,0,-1,0,)1", -1),
        ("(0,0,0,0,0,1,-1,0,)1", "(0,0,0,0,0,-1,1,0,)1", 1),
        ("(0,0,0,0,1,-1,0,0,)1", "(0,0,0,0,-1,1,0,0,)1", -1),
    ];
    let first = singlet.coeff(&(label_of(&adj, leading[0].0), label_of(&adj, leading[0].1)));
    ensure(!first.is_zero(), || "singlet misses the leading pair".into())?;
    for (a, b, s) in leading {
        let c = singlet.coeff(&(label_of(&adj, a), label_of(&adj, b)));
        ensure(c == first.scale(&Rational::from_int(-s as i64)), || {
            format!("coefficient of {a}{b} is {c}, first is {first}")
        })?;
    }
    let rss = peak_rss_mb();
    if let Some(mb) = rss {
        ensure(mb < 8 * 1024, || format!("peak memory {mb} MB"))?;
    }
    Ok(format!(
        "27000+30380+3875+248+1, leading singlet coefficients {} x (-1,1,-1), peak memory {}",
        first.abs(),
        rss.map_or("unknown".into(), |m| format!("{m} MB"))
    ))
}

const TT1: [(&str, &str); 6] = [
    ("-1", "(((4,3),1),-1)"),
    ("-1", "(((3,4),1),-1)"),
    ("1", "(((4,2),2),-1)"),
    ("1", "(((2,4),2),-1)"),
    ("-1", "(((4,1),4),-1)"),
    ("-1", "(((1,4),4),-1)"),
];

const TT2: [(&str, &str); 12] = [
    ("1", "(((1,3),5),-1)"),
    ("-1", "(((3,1),5),-1)"),
    ("-1", "(((1,2),6),-1)"),
    ("1", "(((2,1),6),-1)"),
    ("1", "(((3,4),1),-1)"),
    ("-1", "(((4,3),1),-1)"),
    ("-1", "(((2,4),2),-1)"),
    ("1", "(((4,2),2),-1)"),
    ("1", "(((1,4),4),-1)"),
    ("-1", "(((4,1),4),-1)"),
    ("-1", "(((2,3),3),-1)"),
    ("1", "(((3,2),3),-1)"),
];

/// Parses `[("c", "tree"); ...]` from a printed node state.
fn terms(line: &str) -> BTreeMap<String, FieldElem> {
    line.split("(\"")
        .skip(1)
        .map(|t| {
            let parts: Vec<&str> = t.split('"').collect();
            (parts[2].to_string(), f(parts[0]))
        })
        .collect()
}

fn same_up_to_sign(got: &BTreeMap<String, FieldElem>, want: &[(&str, &str)]) -> bool {
    let want: BTreeMap<String, FieldElem> = want.iter().map(|(c, t)| (t.to_string(), f(c))).collect();
    let neg: BTreeMap<String, FieldElem> = want.iter().map(|(t, c)| (t.clone(), -c)).collect();
    *got == want || *got == neg
}

fn su4_pipeline() -> Check {
    let la = LieAlgebra::A(3);
    // singlets of 4x4x6x15 = copies of the 15 (self-conjugate) in 4x4x6
    let (r4, r6) = (irrep(la, &[1, 0, 0]), irrep(la, &[0, 1, 0]));
    let mut d44 = Decomposition::new(r4.clone(), r4).map_err(|e| e.to_string())?;
    d44.decompose().map_err(|e| e.to_string())?;
    let mut singlets = 0;
    for p in d44.found() {
        let data = p.prepare(d44.left(), d44.right()).map_err(|e| e.to_string())?;
        let x = Arc::new(Irrep::new_imported(&data).map_err(|e| e.to_string())?);
        let mut d = Decomposition::new(x, r6.clone()).map_err(|e| e.to_string())?;
        d.decompose().map_err(|e| e.to_string())?;
        singlets += d.found().iter().filter(|q| q.hw() == [1, 0, 1]).count();
    }
    ensure(singlets == 2, || format!("{singlets} singlets"))?;

    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scripts/su4_singlets.lie");
    let out = lie(&["--script", script.to_str().unwrap()])?;
    let lines: Vec<&str> = out.lines().collect();
    ensure(lines.contains(&"is_sym tt1 1 2 = 1"), || out.clone())?;
    ensure(lines.contains(&"is_sym tt2 1 2 = -1"), || out.clone())?;
    let state = |name: &str| -> Result<&str, String> {
        let i = lines
            .iter()
            .position(|l| l.starts_with(&format!("{name} = (0,0,0,)1")))
            .ok_or_else(|| format!("no singlet {name} printed"))?;
        Ok(lines[i + 1])
    };
    ensure(same_up_to_sign(&terms(state("v1")?), &TT1), || out.clone())?;
    ensure(same_up_to_sign(&terms(state("v2")?), &TT2), || out.clone())?;
    Ok("2 singlets, is_sym +1/-1, both term lists match up to sign".into())
}

fn algebras_up_to_rank_four() -> Vec<LieAlgebra> {
    let mut v = Vec::new();
    for n in 1..=4 {
        v.push(LieAlgebra::A(n));
    }
    for n in 2..=4 {
        v.push(LieAlgebra::B(n));
        v.push(LieAlgebra::C(n));
    }
    v.extend([LieAlgebra::D(3), LieAlgebra::D(4), LieAlgebra::F4, LieAlgebra::G2, LieAlgebra::E6]);
    v
}

fn weight_systems() -> Check {
    let mut count = 0;
    for la in algebras_up_to_rank_four() {
        let n = la.rank();
        let mut hws: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut w = vec![0; n];
                w[i] = 1;
                w
            })
            .collect();
        hws.push(la.adjoint_hw());
        for hw in &hws {
            let ws = la.freudenthal(hw).map_err(|e| e.to_string())?;
            let total: u64 = ws.iter().map(|w| w.degeneracy as u64).sum();
            let dim = la.weyl_dim(hw).map_err(|e| e.to_string())?;
            ensure(total == dim, || format!("{la} {hw:?}: {total} != {dim}"))?;
            count += 1;
        }
        let adj = la.adjoint_hw();
        let dim = la.weyl_dim(&adj).map_err(|e| e.to_string())? as usize;
        let pos = la.positive_roots();
        ensure(2 * pos.len() == dim - n, || format!("{la}: {} positive roots", pos.len()))?;
        let nonzero: BTreeSet<Vec<i32>> = la
            .freudenthal(&adj)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|w| w.dynkin)
            .filter(|w| w.iter().any(|&x| x != 0))
            .collect();
        let mut roots = BTreeSet::new();
        for r in &pos {
            let d = la.dynkin_of_root(r);
            roots.insert(d.iter().map(|x| -x).collect::<Vec<_>>());
            roots.insert(d);
        }
        ensure(nonzero == roots, || format!("{la}: adjoint weights are not the roots"))?;
    }
    Ok(format!("{count} weight systems, {} root systems", algebras_up_to_rank_four().len()))
}

fn multiplicities(la: LieAlgebra, hw: &[i32]) -> HashMap<Vec<i32>, u64> {
    la.freudenthal(hw)
        .unwrap()
        .into_iter()
        .map(|w| (w.dynkin, w.degeneracy as u64))
        .collect()
}

fn tensor_products() -> Check {
    let mut cases: Vec<(LieAlgebra, Vec<Vec<i32>>)> = vec![
        (LieAlgebra::A(1), (1..=13).map(|j| vec![j]).collect()),
        (
            LieAlgebra::A(2),
            vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![0, 2], vec![1, 1], vec![3, 0], vec![0, 3]],
        ),
        (LieAlgebra::B(2), vec![vec![1, 0], vec![0, 1], vec![0, 2]]),
        (LieAlgebra::C(2), vec![vec![1, 0], vec![0, 1], vec![2, 0]]),
        (LieAlgebra::G2, vec![vec![1, 0], vec![0, 1]]),
    ];
    let mut products = 0;
    for (la, hws) in cases.drain(..) {
        for (i, a) in hws.iter().enumerate() {
            for b in &hws[i..] {
                let (l, r) = (irrep(la, a), irrep(la, b));
                let mut d = Decomposition::new(l.clone(), r.clone()).map_err(|e| e.to_string())?;
                d.decompose().map_err(|e| e.to_string())?;
                let tag = format!("{la} {a:?}x{b:?}");
                let sum: usize = d.found().iter().map(|p| p.dim()).sum();
                ensure(sum == l.dim() * r.dim(), || format!("{tag}: dims add to {sum}"))?;

                let mut swapped = Decomposition::new(r.clone(), l.clone()).map_err(|e| e.to_string())?;
                swapped.decompose().map_err(|e| e.to_string())?;
                let multiset = |d: &Decomposition| {
                    let mut v: Vec<Vec<i32>> = d.found().iter().map(|p| p.hw().to_vec()).collect();
                    v.sort();
                    v
                };
                ensure(multiset(&d) == multiset(&swapped), || format!("{tag}: not commutative"))?;

                let (ma, mb) = (multiplicities(la, a), multiplicities(la, b));
                let mut expect: HashMap<Vec<i32>, u64> = HashMap::new();
                for (wa, na) in &ma {
                    for (wb, nb) in &mb {
                        let w: Vec<i32> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
                        *expect.entry(w).or_default() += na * nb;
                    }
                }
                let mut got: HashMap<Vec<i32>, u64> = HashMap::new();
                for p in d.found() {
                    for w in p.weights() {
                        *got.entry(w.dynkin.clone()).or_default() += p.multiplicity(&w.dynkin) as u64;
                    }
                }
                ensure(got == expect, || format!("{tag}: weight multiplicities differ"))?;

                let found = d.found();
                for x in 0..found.len() {
                    for y in x + 1..found.len() {
                        let s = product_scp(found[x].hw_state(), found[y].hw_state(), &l, &r);
                        ensure(s.is_zero(), || format!("{tag}: highest weights {x},{y} overlap"))?;
                    }
                }
                products += 1;
            }
        }
    }
    Ok(format!("{products} products"))
}

fn random_element(rng: &mut ChaCha8Rng) -> FieldElem {
    const RADICANDS: [u64; 7] = [1, 2, 3, 5, 6, 7, 10];
    let n = rng.gen_range(0..=3);
    let terms: Vec<(Rational, u64)> = (0..n)
        .map(|_| {
            let q = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=9)).unwrap();
            (q, RADICANDS[rng.gen_range(0..RADICANDS.len())])
        })
        .collect();
    FieldElem::from_sqrtsum(SqrtSum::from_terms(terms))
}

fn exact_arithmetic() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let xs: Vec<FieldElem> = (0..10_000).map(|_| random_element(&mut rng)).collect();
    for w in xs.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        ensure(&(a + b) + c == a + &(b + c), || format!("+ not associative at {a}, {b}, {c}"))?;
        ensure(&(a * b) * c == a * &(b * c), || format!("* not associative at {a}, {b}, {c}"))?;
        ensure(a * b == b * a, || format!("* not commutative at {a}, {b}"))?;
        ensure(a * &(b + c) == &(a * b) + &(a * c), || format!("not distributive at {a}, {b}, {c}"))?;
        ensure((a + &(-a)).is_zero() && a - b == a + &(-b) && a + &FieldElem::zero() == *a, || format!("identities fail at {a}"))?;
        if !a.is_zero() {
            let inv = a.inv().map_err(|e| e.to_string())?;
            ensure((a * &inv).is_one(), || format!("{a} * {inv} != 1"))?;
        }
        ensure(a.simplify().simplify() == a.simplify() && a.simplify() == *a, || {
            format!("simplify not idempotent at {a}")
        })?;
        let x = a.to_f64();
        let numeric = if x.abs() < 1e-12 { 0 } else if x > 0.0 { 1 } else { -1 };
        ensure(a.signum() == numeric, || format!("sign of {a} is {}, value {x}", a.signum()))?;
    }
    let g2 = scp_zero_weights(LieAlgebra::G2, 1, 2).map_err(|e| e.to_string())?;
    ensure(g2 == f("1/2*sqrt(3)"), || format!("G2 zero-weight product {g2}"))?;
    Ok("10000 random elements, G2 zero-weight product sqrt(3)/2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("transcript fidelity", transcripts, Duration::from_secs(2)),
        ("worked example", worked_example, Duration::from_secs(1)),
        ("E6 27 x 27bar", e6_case, Duration::from_secs(600)),
        ("E8 248 x 248", e8_case, Duration::from_secs(4 * 3600)),
        ("SU(4) multi-product", su4_pipeline, Duration::from_secs(60)),
        ("weight system properties", weight_systems, Duration::from_secs(120)),
        ("tensor product properties", tensor_products, Duration::from_secs(300)),
        ("exact arithmetic", exact_arithmetic, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let took = t.elapsed();
        let result = result.and_then(|msg| {
            if took <= *budget {
                Ok(msg)
            } else {
                Err(format!("took {took:.2?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(msg) => println!("criterion {} ({name}): PASS in {took:.2?}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL in {took:.2?}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
