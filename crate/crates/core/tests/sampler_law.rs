//! Partner law of `(0,0)` under the sampler on `L*(8, 1, 1)` against the
//! exact law of a uniformly random admissible matching.

use rayon::prelude::*;

use majperc::matchings::sample_admissible;
use majperc::TorusPoint;

/// `(x, y, probability)` for each admissible partner of `(0,0)`. Computed
/// exactly by inclusion-exclusion over matchings of the forbidden stencil
/// graph, evaluated with row transfer matrices.
const EXACT: [(u32, u32, f64); 57] = [
    (1, 0, 0.017524425934427622),
    (2, 0, 0.017535696375103337),
    (3, 0, 0.01754700015858141),
    (4, 0, 0.017547025706020278),
    (5, 0, 0.01754700015858141),
    (6, 0, 0.017535696375103337),
    (7, 0, 0.017524425934427622),
    (2, 1, 0.01754607993793853),
    (3, 1, 0.017546724627746677),
    (4, 1, 0.017547047417604815),
    (5, 1, 0.017546724627746677),
    (6, 1, 0.01754607993793853),
    (0, 2, 0.01753006133021613),
    (1, 2, 0.017535688728692076),
    (2, 2, 0.017541348534804237),
    (3, 2, 0.017547017242745523),
    (4, 2, 0.017547034325364527),
    (5, 2, 0.017547017242745523),
    (6, 2, 0.017541348534804237),
    (7, 2, 0.017535688728692076),
    (0, 3, 0.017546292288725826),
    (1, 3, 0.01754640033532284),
    (2, 3, 0.01754672376522972),
    (3, 3, 0.017546940773343983),
    (4, 3, 0.01754704919242503),
    (5, 3, 0.017546940773343983),
    (6, 3, 0.01754672376522972),
    (7, 3, 0.01754640033532284),
    (0, 4, 0.017546970022378972),
    (1, 4, 0.017546982847475513),
    (2, 4, 0.017547008574932306),
    (3, 4, 0.017547034326937532),
    (4, 4, 0.017547042944718313),
    (5, 4, 0.017547034326937532),
    (6, 4, 0.017547008574932306),
    (7, 4, 0.017546982847475513),
    (0, 5, 0.017546292288725826),
    (1, 5, 0.01754640033532284),
    (2, 5, 0.01754672376522972),
    (3, 5, 0.017546940773343983),
    (4, 5, 0.01754704919242503),
    (5, 5, 0.017546940773343983),
    (6, 5, 0.01754672376522972),
    (7, 5, 0.01754640033532284),
    (0, 6, 0.01753006133021613),
    (1, 6, 0.017535688728692076),
    (2, 6, 0.017541348534804237),
    (3, 6, 0.017547017242745523),
    (4, 6, 0.017547034325364527),
    (5, 6, 0.017547017242745523),
    (6, 6, 0.017541348534804237),
    (7, 6, 0.017535688728692076),
    (2, 7, 0.01754607993793853),
    (3, 7, 0.017546724627746677),
    (4, 7, 0.017547047417604815),
    (5, 7, 0.017546724627746677),
    (6, 7, 0.01754607993793853),
];

const SAMPLES: u64 = 100_000;

#[test]
fn partner_frequencies_match_uniform_law() {
    let n = 8;
    let origin = TorusPoint { x: 0, y: 0 }.index(n);
    let mut counts = (0..SAMPLES)
        .into_par_iter()
        .fold(
            || vec![0u64; 64],
            |mut acc, s| {
                let m = sample_admissible(n, 1, 1, 0x5A3B_0000 + s).unwrap();
                acc[m.partner(0, origin)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; 64],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );

    let total: f64 = EXACT.iter().map(|e| e.2).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let mut worst = 0.0f64;
    for &(x, y, p) in &EXACT {
        let v = TorusPoint { x, y }.index(n);
        let freq = counts[v] as f64 / SAMPLES as f64;
        let se = (p * (1.0 - p) / SAMPLES as f64).sqrt();
        let z = (freq - p).abs() / se;
        worst = worst.max(z);
        assert!(
            z <= 3.0,
            "partner ({x}, {y}): frequency {freq}, exact {p}, {z:.2} standard errors"
        );
        counts[v] = 0;
    }
    assert!(
        counts.iter().all(|&c| c == 0),
        "sampler produced an inadmissible partner"
    );
    println!("largest deviation {worst:.2} standard errors");
}
