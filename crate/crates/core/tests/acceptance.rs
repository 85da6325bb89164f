//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints one line whether it passes or not.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fixture, fixture_paths, fixtures, random_corpus};
use maniplex::generators::{
    hypercube, rectified_cubic_3torus, torus_44, torus_44_lattice, CellKind, SHEARED_BASIS, STANDARD_BASIS,
};
use maniplex::graph::{are_isomorphic, is_isomorphism, ColourSet, Partition};
use maniplex::io::{read_mpx, write_mpx};
use maniplex::maniplex::ColouredPath;
use maniplex::mix::{find_covering, mix};
use maniplex::polytopality::{
    check_cip, check_cip_by_chains, check_spip, check_wpip, flag_graph, is_polytopal, wpip_failure_at,
    ComponentCache, SpipMode,
};
use maniplex::poset::{ElementId, InducedPoset};
use maniplex::Maniplex;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CHAIN_LIMIT: usize = 10_000;

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("{4,4}_(1,1): counts, diamond witness, CIP/WPIP/SPIP witnesses", criterion_1),
        ("{4,4}_(1,0): counts, two chains, unfaithful; Klein bottle twin", criterion_2),
        ("rectified cubic 3-torus: cells, diamond, CIP, WPIP and section", criterion_3),
        ("polytopal fixtures are isomorphic to the flag graphs of their posets", criterion_4),
        ("CIP = WPIP = SPIP = polytope on fixtures and 1000 random samples", criterion_5),
        ("chain intersections, face factors, CIP => diamond, path normalisation", criterion_6),
        ("mixes and coverings", criterion_7),
        ("mpx round trip, CLI exit codes, JSON goldens", criterion_8),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {title} [{detail}]", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL  {title} [{reason}]", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

/// Block of the meet of the face partitions of the given ranks containing `v`.
fn section(m: &Maniplex, ranks: ColourSet, v: usize) -> Vec<usize> {
    let meet = Partition::meet_all(ranks.iter().map(|i| m.face_partition(i))).unwrap().unwrap();
    meet.block(meet.block_of(v))
}

fn criterion_1() -> Check {
    let m = fixture("torus44_1_1");
    ensure!(m.flag_count() == 16, "{} flags", m.flag_count());
    ensure!(m.f_vector() == vec![2, 4, 2], "faces per rank {:?}", m.f_vector());

    let induced = InducedPoset::new(&m);
    let diamond = induced.poset().diamond();
    let w = diamond.witness.ok_or("diamond condition holds")?;
    ensure!(w.lower.rank == 0 && w.upper.rank == 2, "diamond witness {w:?} is not (vertex, face)");
    ensure!(w.count == 4, "diamond witness has {} edges", w.count);
    let violations = induced.poset().diamond_violations();
    ensure!(
        violations.len() == 4 && violations.iter().all(|v| v.lower.rank == 0 && v.upper.rank == 2 && v.count == 4),
        "violations {violations:?}"
    );

    let cip = check_cip(&m);
    let wpip = check_wpip(&m);
    let spip = check_spip(&m, SpipMode::Exhaustive).map_err(|e| e.to_string())?;
    ensure!(!cip.holds && !wpip.holds && !spip.holds, "cip {} wpip {} spip {}", cip.holds, wpip.holds, spip.holds);
    let w = cip.witness.unwrap();
    ensure!(w.colours == ColourSet::from_iter([0, 2]), "CIP witness at S={}", w.colours);
    let block = section(&m, w.colours, w.flags.0);
    ensure!(block.contains(&w.flags.1), "witness flags in different sections");
    ensure!(block.len() == 4, "section has {} flags", block.len());
    ensure!(block.iter().all(|&v| block.contains(&m.adj(1, v))), "section is not a union of colour-1 edges");
    let edges: HashSet<(usize, usize)> = block.iter().map(|&v| (v.min(m.adj(1, v)), v.max(m.adj(1, v)))).collect();
    ensure!(edges.len() == 2, "{} colour-1 edges", edges.len());
    ensure!(m.adj(1, w.flags.0) != w.flags.1, "witness flags share an edge");

    // every non-empty intersection of a {0,1}-component with a {1,2}-component
    let faces = m.graph().components(ColourSet::from_iter([0, 1]));
    let verts = m.graph().components(ColourSet::from_iter([1, 2]));
    let meet = faces.meet(&verts).unwrap();
    ensure!(meet.block_sizes().iter().all(|&s| s == 4), "intersections {:?}", meet.block_sizes());

    Ok(format!("16 flags, faces 2/4/2, 4 edges between a vertex and a face, CIP fails at S={} on two colour-1 edges", w.colours))
}

fn criterion_2() -> Check {
    let m = fixture("torus44_1_0");
    ensure!(m.flag_count() == 8, "{} flags", m.flag_count());
    ensure!(m.f_vector() == vec![1, 2, 1], "faces per rank {:?}", m.f_vector());
    let induced = InducedPoset::new(&m);
    let chains = induced.maximal_chains();
    ensure!(chains.len() == 2, "{} maximal chains", chains.len());
    let faithful = induced.is_faithful();
    ensure!(!faithful.holds, "faithful");
    ensure!(!induced.is_faithful_by_chain_count(), "chain count matches flags");
    ensure!(!induced.is_faithful_by_intersections(), "every chain meets in one flag");
    let w = faithful.witness.unwrap();
    ensure!(w.flags.len() == 4, "faithfulness witness {:?}", w.flags);

    let klein = fixture("klein44");
    ensure!(klein.flag_count() == 8, "Klein bottle map has {} flags", klein.flag_count());
    let kp = InducedPoset::new(&klein);
    ensure!(kp.poset().isomorphism(induced.poset()).is_some(), "induced posets differ");
    let iso = are_isomorphic(klein.graph(), m.graph()).map_err(|e| e.to_string())?;
    ensure!(iso.is_none(), "Klein bottle map is isomorphic to the torus map");
    Ok("8 flags, faces 1/2/1, 2 chains, 4 flags per chain; Klein twin poset-isomorphic only".into())
}

struct TorusFacts {
    flags: usize,
    cuboctahedra: usize,
    octahedra: usize,
    diamond: bool,
    cip: bool,
    wpip_03: Option<(usize, usize)>,
    two_8_cycles: bool,
    vertex_is_cube: bool,
}

fn rectified_facts(basis: [[i64; 3]; 3]) -> Result<TorusFacts, String> {
    let m = rectified_cubic_3torus(basis).map_err(|e| e.to_string())?;
    let kinds: Vec<Option<CellKind>> = m.faces(3).iter().map(|f| CellKind::from_flag_count(f.len())).collect();
    let count = |k| kinds.iter().filter(|&&x| x == Some(k)).count();
    let diamond = InducedPoset::new(&m).poset().diamond().holds;
    let cip = check_cip(&m).holds;

    let g = m.graph();
    let mut cache = ComponentCache::new(g);
    let wpip_03 = wpip_failure_at(&m, &mut cache, 0, 3);
    if let Some((u, v)) = wpip_03 {
        let high = g.components(ColourSet::from_iter([1, 2, 3]));
        let low = g.components(ColourSet::from_iter([0, 1, 2]));
        let mid = g.components(ColourSet::from_iter([1, 2]));
        ensure!(
            high.same_block(u, v) && low.same_block(u, v) && !mid.same_block(u, v),
            "WPIP witness ({u}, {v}) is not a missing {{1,2}}-path"
        );
    }

    let twelve = g.components(ColourSet::from_iter([1, 2]));
    let meet = m.face_partition(0).meet(m.face_partition(3)).unwrap();
    let two_8_cycles = meet.blocks().iter().any(|block| {
        let cell = m.face_of(3, block[0]);
        if m.faces(3)[cell].len() != 96 {
            return false;
        }
        let ids: HashSet<usize> = block.iter().map(|&v| twelve.block_of(v)).collect();
        ids.len() == 2 && ids.iter().all(|&id| twelve.block(id).len() == 8)
    });

    let vertex = g.component_of(ColourSet::from_iter([1, 2, 3]), 0);
    let index: std::collections::HashMap<usize, usize> = vertex.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let rows: Vec<Vec<usize>> = (1..4).map(|c| vertex.iter().map(|&v| index[&g.adj(c, v)]).collect()).collect();
    let figure = maniplex::ColouredGraph::new(3, rows).map_err(|e| e.to_string())?;
    let cube = hypercube(3).unwrap();
    let vertex_is_cube = are_isomorphic(&figure, cube.graph()).map_err(|e| e.to_string())?.is_some();

    Ok(TorusFacts {
        flags: m.flag_count(),
        cuboctahedra: count(CellKind::Cuboctahedron),
        octahedra: count(CellKind::Octahedron),
        diamond,
        cip,
        wpip_03,
        two_8_cycles,
        vertex_is_cube,
    })
}

fn criterion_3() -> Check {
    let check = |f: &TorusFacts, want_diamond: bool| -> Result<(), String> {
        ensure!(f.flags == 576, "{} flags", f.flags);
        ensure!(f.cuboctahedra == 4 && f.octahedra == 4, "{} cuboctahedra, {} octahedra", f.cuboctahedra, f.octahedra);
        ensure!(f.diamond == want_diamond, "diamond condition {}", f.diamond);
        ensure!(!f.cip, "CIP holds");
        ensure!(f.wpip_03.is_some(), "WPIP holds at (0,3)");
        ensure!(f.two_8_cycles, "no vertex meets a cuboctahedron in two 8-cycles");
        ensure!(f.vertex_is_cube, "vertex figure is not a cube");
        Ok(())
    };
    let sheared = rectified_facts(SHEARED_BASIS)?;
    check(&sheared, true).map_err(|e| format!("basis {SHEARED_BASIS:?}: {e}"))?;
    // With (1,0,0) in the lattice, opposite vertices of the squares normal
    // to y and z are identified and those squares break the diamond
    // condition; everything else carries over.
    let standard = rectified_facts(STANDARD_BASIS)?;
    check(&standard, false).map_err(|e| format!("basis {STANDARD_BASIS:?}: {e}"))?;
    let (u, v) = sheared.wpip_03.unwrap();
    Ok(format!(
        "basis {SHEARED_BASIS:?}: 576 flags, 4+4 cells, diamond holds, CIP fails, WPIP (0,3) at flags {u},{v}; \
         basis {STANDARD_BASIS:?} pinches 8 squares and fails the diamond condition"
    ))
}

fn criterion_4() -> Check {
    let mut names: Vec<String> = (2..=6).map(|p| format!("polygon_{p}")).collect();
    names.extend((1..=4).map(|d| format!("hypercube_{d}")));
    names.push("torus44_2_0".into());
    names.push("torus44_2_2".into());
    for name in &names {
        let m = fixture(name);
        let report = is_polytopal(&m).map_err(|e| format!("{name}: {e}"))?;
        let induced = InducedPoset::new(&m);
        ensure!(induced.poset().is_polytope().is_polytope, "{name}: poset is not a polytope");
        ensure!(report.polytopal, "{name}: not polytopal");
        let (fg, chains) = flag_graph(induced.poset()).map_err(|e| format!("{name}: {e}"))?;
        let phi = report.isomorphism.ok_or(format!("{name}: no isomorphism"))?;
        ensure!(is_isomorphism(m.graph(), &fg, &phi), "{name}: map is not an isomorphism");
        ensure!(
            (0..m.flag_count()).all(|v| chains[phi[v]] == induced.chain_of_flag(v)),
            "{name}: isomorphism disagrees with the chain of each flag"
        );
    }
    Ok(format!("{} fixtures, bijections verified edge by edge", names.len()))
}

fn corpus() -> Vec<(String, Maniplex)> {
    let mut all = fixtures();
    all.extend(random_corpus(1000).into_iter().map(|(seed, m)| (format!("random seed {seed}"), m)));
    all
}

fn criterion_5() -> Check {
    let all = corpus();
    let mut disagreements = Vec::new();
    let mut polytopal = 0;
    let mut by_chains = 0;
    for (name, m) in &all {
        let cip = check_cip(m).holds;
        let wpip = check_wpip(m).holds;
        let spip = check_spip(m, SpipMode::Exhaustive).map_err(|e| e.to_string())?.holds;
        let induced = InducedPoset::new(m);
        let poset = induced.poset().is_polytope().is_polytope;
        let literal = check_cip_by_chains(m, &induced, CHAIN_LIMIT);
        if literal.is_some() {
            by_chains += 1;
        }
        if !(cip == wpip && wpip == spip && spip == poset && literal.unwrap_or(cip) == cip) {
            disagreements.push(format!("{name}: cip {cip} wpip {wpip} spip {spip} poset {poset} chains {literal:?}"));
        }
        polytopal += usize::from(poset);
    }
    ensure!(disagreements.is_empty(), "{} disagreements: {}", disagreements.len(), disagreements.join("; "));
    Ok(format!(
        "{} maniplexes ({} polytopal), 0 disagreements; literal chain check on {}",
        all.len(),
        polytopal,
        by_chains
    ))
}

fn criterion_6() -> Check {
    let all = corpus();
    let mut chains_checked = 0;
    let mut faces_checked = 0;
    let mut cip_cases = 0;
    let mut quotients = 0;
    for (name, m) in &all {
        let induced = InducedPoset::new(m);
        let maximal = induced.maximal_chains();
        if maximal.len() <= CHAIN_LIMIT {
            let mut seen: HashSet<Vec<ElementId>> = HashSet::new();
            let n = m.rank();
            for chain in &maximal {
                let proper = chain.proper();
                for mask in 1u32..(1 << n) {
                    let sub: Vec<ElementId> =
                        (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| proper[i]).collect();
                    if seen.insert(sub.clone()) {
                        let flags = induced.chain_intersection(&sub).map_err(|e| format!("{name}: {e}"))?;
                        ensure!(!flags.is_empty(), "{name}: empty intersection for {sub:?}");
                    }
                }
            }
            chains_checked += seen.len();
        }

        // Outside the fixtures a face may only be a quotient of the product;
        // it is still covered by it, and is the product itself whenever the
        // maniplex is polytopal.
        let must_be_product = !name.starts_with("random") || induced.poset().is_polytope().is_polytope;
        let n = m.rank();
        for i in 1..n.saturating_sub(1) {
            for face in m.faces(i) {
                let factors = m.face_factors(face).map_err(|e| format!("{name}: {e}"))?;
                ensure!(
                    factors.coordinates.iter().all(|&(a, _)| a != usize::MAX),
                    "{name}: {i}-face {} is not covered by its factors",
                    face.index
                );
                if factors.product_holds {
                    faces_checked += 1;
                } else {
                    ensure!(!must_be_product, "{name}: {i}-face {} is not a product", face.index);
                    quotients += 1;
                }
            }
        }

        if check_cip(m).holds {
            cip_cases += 1;
            ensure!(induced.poset().diamond().holds, "{name}: CIP holds but the diamond condition fails");
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut paths = 0;
    for (name, m) in fixtures() {
        let n = m.rank();
        for _ in 0..1000 {
            let pivots: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
            let len = if free.is_empty() { 0 } else { rng.gen_range(0..40) };
            let colours: Vec<usize> = (0..len).map(|_| free[rng.gen_range(0..free.len())]).collect();
            let path = ColouredPath::new(rng.gen_range(0..m.flag_count()), colours);
            let segments = m.normalize_path(&path, &pivots).map_err(|e| format!("{name}: {e}"))?;
            ensure!(segments.len() == pivots.len() + 1, "{name}: {} segments", segments.len());
            ensure!(segments[0].start == path.start, "{name}: start moved");
            for w in segments.windows(2) {
                ensure!(w[0].end(m.graph()) == w[1].start, "{name}: segments do not join");
            }
            ensure!(segments.last().unwrap().end(m.graph()) == path.end(m.graph()), "{name}: end moved");
            for (j, seg) in segments.iter().enumerate() {
                let lo = if j == 0 { None } else { Some(pivots[j - 1]) };
                let hi = pivots.get(j).copied();
                ensure!(
                    seg.colours.iter().all(|&c| lo.is_none_or(|p| c > p) && hi.is_none_or(|p| c < p)),
                    "{name}: segment {j} {:?} leaves its window for pivots {pivots:?}",
                    seg.colours
                );
            }
            paths += 1;
        }
    }
    Ok(format!(
        "{chains_checked} chains non-empty, {faces_checked} middle faces are products ({quotients} random non-polytopal faces are proper quotients), CIP => diamond on {cip_cases}, {paths} paths normalised"
    ))
}

fn criterion_7() -> Check {
    let mut mixes = 0;
    for (name, m) in fixtures() {
        for base in [0, m.flag_count() - 1] {
            let x = mix(&m, &m, base, base).map_err(|e| format!("{name}: {e}"))?;
            ensure!(
                are_isomorphic(x.maniplex.graph(), m.graph()).map_err(|e| e.to_string())?.is_some(),
                "{name}: mix with itself at {base} is not isomorphic to it"
            );
            let (p, q) = x.projections();
            ensure!(p.verify(x.maniplex.graph(), m.graph()) && q.verify(x.maniplex.graph(), m.graph()), "{name}: projection");
            mixes += 1;
        }
    }

    let big = torus_44(2, 0).unwrap();
    let small = torus_44(1, 0).unwrap();
    let cover = find_covering(&big, &small).map_err(|e| e.to_string())?.ok_or("no covering {4,4}_(2,0) -> {4,4}_(1,0)")?;
    ensure!(cover.fibre_sizes(small.flag_count()).iter().all(|&s| s == 4), "covering is not 4-to-1");
    let x = mix(&big, &small, 0, 0).map_err(|e| e.to_string())?;
    ensure!(are_isomorphic(x.maniplex.graph(), big.graph()).map_err(|e| e.to_string())?.is_some(), "mix is not {{4,4}}_(2,0)");
    let (p, q) = x.projections();
    ensure!(p.verify(x.maniplex.graph(), big.graph()) && q.verify(x.maniplex.graph(), small.graph()), "projections");
    mixes += 1;

    let thin = torus_44_lattice([1, 0], [0, 2]).unwrap();
    let flat = torus_44_lattice([2, 0], [0, 1]).unwrap();
    ensure!(!is_polytopal(&thin).map_err(|e| e.to_string())?.polytopal, "1x2 torus is polytopal");
    ensure!(!is_polytopal(&flat).map_err(|e| e.to_string())?.polytopal, "2x1 torus is polytopal");
    let y = mix(&thin, &flat, 0, 0).map_err(|e| e.to_string())?;
    ensure!(is_polytopal(&y.maniplex).map_err(|e| e.to_string())?.polytopal, "mix of the 1x2 and 2x1 tori is not polytopal");
    let (p, q) = y.projections();
    ensure!(p.verify(y.maniplex.graph(), thin.graph()) && q.verify(y.maniplex.graph(), flat.graph()), "projections");
    mixes += 1;

    Ok(format!("{mixes} mixes with verified projections; 4-to-1 cover absorbed; 1x2 and 2x1 tori mix to a polytope"))
}

fn run(args: &[&str], dir: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_maniplex"))
        .args(args)
        .current_dir(dir)
        .env_remove("MANIPLEX_THREADS")
        .output()
        .expect("run the binary");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_8() -> Check {
    let paths = fixture_paths();
    for path in &paths {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let doc = read_mpx(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(write_mpx(&doc) == text, "{} does not round trip", path.display());
        ensure!(read_mpx(&write_mpx(&doc)).unwrap() == doc, "{} reparses differently", path.display());
    }

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let fx = common::fixture_dir();
    let f = |name: &str| fx.join(format!("{name}.mpx")).to_string_lossy().into_owned();
    std::fs::write(dir.join("bad.mpx"), "mpx 1 2\n0 1\n").unwrap();

    let (code, out) = run(&["check", &f("torus44_1_1")], dir);
    ensure!(code == 1 && out.contains("non-polytopal; CIP fails at S={0,2}"), "check torus44_1_1: exit {code}\n{out}");
    let script: [(&[&str], i32); 10] = [
        (&["gen", "torus44", "--b", "2", "--c", "0", "-o", "t20.mpx"], 0),
        (&["check", "t20.mpx"], 0),
        (&["gen", "torus44", "--b", "1", "--c", "0", "-o", "t10.mpx"], 0),
        (&["mix", "t20.mpx", "t10.mpx", "-o", "m.mpx"], 0),
        (&["iso", "m.mpx", "t20.mpx"], 0),
        (&["iso", "t10.mpx", &f("klein44")], 1),
        (&["check", "bad.mpx"], 2),
        (&["check", "missing.mpx"], 66),
        (&["frobnicate"], 64),
        (&["gen", "polygon"], 64),
    ];
    for (args, want) in script {
        let (code, out) = run(args, dir);
        ensure!(code == want, "`maniplex {}` exited {code}, expected {want}\n{out}", args.join(" "));
    }

    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let goldens: [(&str, Vec<String>); 3] = [
        ("check_torus44_1_1.json", vec!["check".into(), "--json".into(), f("torus44_1_1")]),
        ("check_polygon_4.json", vec!["check".into(), "--json".into(), f("polygon_4")]),
        ("poset_torus44_1_0.json", vec!["poset".into(), "--json".into(), f("torus44_1_0")]),
    ];
    for (file, args) in &goldens {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, out) = run(&args, dir);
        let want = std::fs::read_to_string(golden.join(file)).map_err(|e| format!("{file}: {e}"))?;
        ensure!(out == want, "{file} changed");
    }
    Ok(format!("{} fixtures round trip, 11 CLI exit codes, {} golden files", paths.len(), goldens.len()))
}
