//! The commutant of `j(C*(R))` inside `C*(R̲)` is the image of `C*(R′)`
//! under `k`; here both sides are computed and compared.

use bratteli::fdcstar::{
    brute_force_commutant, commutant_embed_k, include_j, AlgebraElement, InclusionGraph, Span, TOLERANCE,
};

fn main() {
    let g = InclusionGraph::from_ids(
        &[("x1", "v"), ("x2", "v"), ("x3", "w")],
        &[("c1", "v", "A"), ("c2", "v", "A"), ("c3", "w", "A"), ("c4", "v", "B")],
    )
    .unwrap();
    let lifted = g.lifted_relation();
    let j_image: Vec<AlgebraElement> = AlgebraElement::basis(g.relation())
        .iter()
        .map(|f| include_j(&g, f).unwrap())
        .collect();
    let k_image: Vec<AlgebraElement> = AlgebraElement::basis(g.edge_relation())
        .iter()
        .map(|h| commutant_embed_k(&g, h).unwrap())
        .collect();

    let brute = brute_force_commutant(lifted, &j_image);
    let span = Span::of(lifted, &k_image, TOLERANCE);
    let brute_span = Span::of(lifted, &brute.basis, TOLERANCE);
    println!("dim C*(R_lifted) = {}", lifted.dimension());
    println!(
        "dim commutant = {}, dim k(C*(R')) = {}",
        brute.dimension(),
        span.dimension()
    );
    assert!(brute.basis.iter().all(|f| span.contains(f)));
    assert!(k_image.iter().all(|f| brute_span.contains(f)));
    println!("spans agree");
}
