// Margin-maximized chamber solutions for g=2 and g=3.
use rotno_core::crossed::{classify_cover, CoverType};
use rotno_core::lift::build_context;
use rotno_core::sample::{pair_with_reduced_concat, rng_for};
use rotno_core::words::{Genus, Word};

fn letter_idx(x: i16) -> usize { ((x.unsigned_abs() - 1) * 2 + if x > 0 { 0 } else { 1 }) as usize }
fn inv(i: usize) -> usize { i ^ 1 }

fn counts_core(w: &Word, v: &mut Vec<i64>, l: usize, sign: i64) {
    let (_, core) = w.cyclic_reduce();
    if core.is_empty() { return; }
    let ls = core.letters();
    for i in 0..ls.len() {
        v[letter_idx(ls[i]) * l + letter_idx(ls[(i + 1) % ls.len()])] += sign;
    }
}

fn solve(g: u16, seed_base: u64) {
    let genus = Genus::new(g).unwrap();
    let ctx = build_context(genus).unwrap();
    let l = 4 * g as usize;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..40000u64 {
        let mut rng = rng_for(seed_base, i);
        let (a, b) = pair_with_reduced_concat(&mut rng, genus, 10);
        if classify_cover(&ctx, &a, &b).unwrap() != CoverType::PuncturedTorus { continue; }
        let mut v = vec![0i64; l * l];
        counts_core(&a.multiply(&b).unwrap(), &mut v, l, 1);
        counts_core(&a, &mut v, l, -1);
        counts_core(&b, &mut v, l, -1);
        rows.push(v);
        if rows.len() >= 4000 { break; }
    }
    let table = |dpos: &[f64]| -> Vec<f64> {
        let mut t = vec![0.0f64; l * l];
        for u in 0..l {
            for v in 0..l {
                if v == inv(u) { continue; }
                let x = dpos[v] - (dpos[inv(u)] + 0.5) - 0.5;
                t[u * l + v] = x - x.round();
            }
        }
        t
    };
    let eval = |dpos: &[f64]| -> (usize, f64) {
        let t = table(dpos);
        let mut viol = 0usize;
        for row in &rows {
            let mut s = 0.0;
            for p in 0..l * l { if row[p] != 0 { s += row[p] as f64 * t[p]; } }
            if s.abs() > 1e-9 { viol += 1; }
        }
        // margin: distance of used wrap-arguments from the walls (arg = +-1/2)
        let mut margin = f64::INFINITY;
        for u in 0..l {
            for v in 0..l {
                if v == inv(u) { continue; }
                let x = dpos[v] - dpos[inv(u)]; // wall when = 0 mod 1
                let d = (x - x.round()).abs();
                if d < margin { margin = d; }
            }
        }
        // distinctness of raw positions too
        for i in 0..l { for j in i+1..l {
            let x = dpos[i] - dpos[j];
            let d = (x - x.round()).abs();
            if d < margin { margin = d; }
        }}
        (viol, margin)
    };
    let mut state = 0xabcdef12u64.wrapping_add(seed_base);
    let mut rnd = move || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (state >> 11) as f64 / (1u64 << 53) as f64 };
    let mut global_best: Option<(Vec<f64>, f64)> = None;
    for restart in 0..6 {
        let mut best: Vec<f64> = (0..l).map(|_| rnd()).collect();
        let (mut bviol, mut bmargin) = eval(&best);
        let mut temp = 0.3;
        for it in 0..120000 {
            let mut cand = best.clone();
            let k = (rnd() * l as f64) as usize % l;
            cand[k] = (cand[k] + (rnd() - 0.5) * temp).rem_euclid(1.0);
            let (v, m) = eval(&cand);
            if v < bviol || (v == bviol && m > bmargin) {
                best = cand; bviol = v; bmargin = m;
            }
            if it % 15000 == 14999 { temp *= 0.6; }
        }
        if bviol == 0 {
            if global_best.as_ref().map_or(true, |(_, gm)| bmargin > *gm) {
                global_best = Some((best.clone(), bmargin));
            }
            println!("g={g} restart {restart}: 0 violations, margin {bmargin:.4}");
        } else {
            println!("g={g} restart {restart}: {bviol} violations (no solve)");
        }
    }
    if let Some((best, margin)) = global_best {
        println!("g={g} BEST margin {margin:.4}; positions:");
        let name = |i: usize| -> String {
            let k = i / 2 + 1;
            let handle = (k + 1) / 2;
            let c = match (k % 2 == 1, i % 2 == 0) { (true, true) => 'a', (false, true) => 'b', (true, false) => 'A', (false, false) => 'B' };
            format!("{c}{handle}")
        };
        let mut idx: Vec<usize> = (0..l).collect();
        idx.sort_by(|&a, &b| best[a].partial_cmp(&best[b]).unwrap());
        for i in idx { println!("  D({}) = {:.5}", name(i), best[i]); }
    }
}

fn main() {
    solve(2, 555);
    solve(3, 777);
}
