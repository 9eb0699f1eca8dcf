//! Jump-structure verification on the candidate distributive law of the
//! truncated finite-set universe: the identity lens witnesses the factoring,
//! the projection square commutes, the recovered inducing lens is the
//! product table and is Cartesian, and the search finds the witness again.

use polyverse::distributor::{
    distr_law_candidate, mk_distributor, search_jump_structure, verify_jump_structure,
    JumpOutcome,
};
use polyverse::monoidal::{composite_pos_rank, CompositePos};
use polyverse::poly::{eq_lens, id_lens, is_cartesian, Lens};
use polyverse::universes::mk_ufin;

#[test]
fn candidate_law_is_a_jump_structure_along_the_identity() {
    let u = mk_ufin(3).unwrap();
    let cand = distr_law_candidate(&u, u.pi_lens().unwrap()).unwrap();
    let phi = id_lens(&u.poly);
    let outcome = verify_jump_structure(&cand, &phi).unwrap();
    let js = outcome.verified().expect("identity must witness the jump");
    assert!(js.square_ok);
    assert!(is_cartesian(&js.reconstructed));
    assert!(eq_lens(&js.reconstructed, u.pi_lens().unwrap()).unwrap().equal);
    assert!(eq_lens(&js.phi, &phi).unwrap().equal);
}

#[test]
fn search_rediscovers_the_identity_witness() {
    let u = mk_ufin(3).unwrap();
    let cand = distr_law_candidate(&u, u.pi_lens().unwrap()).unwrap();
    let js = search_jump_structure(&cand).unwrap().expect("search must succeed");
    assert!(eq_lens(&js.phi, &id_lens(&u.poly)).unwrap().equal);
    assert!(eq_lens(&js.reconstructed, u.pi_lens().unwrap()).unwrap().equal);
}

fn rank_in_uu(u: &polyverse::universes::UniversePoly, outer: usize, gamma: &[usize]) -> usize {
    composite_pos_rank(
        &u.poly,
        &u.poly,
        &CompositePos {
            outer,
            inner_choice: gamma.to_vec(),
        },
    )
    .unwrap()
}

#[test]
fn backward_mutation_obstructs_the_jump() {
    let u = mk_ufin(3).unwrap();
    let cand = distr_law_candidate(&u, u.pi_lens().unwrap()).unwrap();
    let rank = rank_in_uu(&u, 2, &[1, 2]);
    let mut backwards = cand.lens.backward_tables().to_vec();
    assert!(backwards[rank].len() >= 2);
    backwards[rank].swap(0, 1);
    let mutated_lens = Lens::new_partial(
        cand.lens.source().clone(),
        cand.lens.target().clone(),
        cand.lens.forward_table().to_vec(),
        backwards,
    )
    .unwrap();
    let mutated = mk_distributor(
        cand.p.clone(),
        cand.q.clone(),
        cand.r.clone(),
        cand.s.clone(),
        mutated_lens,
    )
    .unwrap();
    let outcome = verify_jump_structure(&mutated, &id_lens(&u.poly)).unwrap();
    match outcome {
        JumpOutcome::Obstructed { reason } => assert!(reason.contains("square")),
        JumpOutcome::Verified(_) => panic!("mutated distributor must not verify"),
    }
}

#[test]
fn forward_mutation_obstructs_the_jump() {
    let u = mk_ufin(3).unwrap();
    let cand = distr_law_candidate(&u, u.pi_lens().unwrap()).unwrap();
    let rank = rank_in_uu(&u, 1, &[2]);
    let skewed_image = rank_in_uu(&u, 2, &[0, 1]);
    let mut forwards = cand.lens.forward_table().to_vec();
    let mut backwards = cand.lens.backward_tables().to_vec();
    forwards[rank] = Some(skewed_image);
    backwards[rank] = vec![0];
    let mutated_lens = Lens::new_partial(
        cand.lens.source().clone(),
        cand.lens.target().clone(),
        forwards,
        backwards,
    )
    .unwrap();
    let mutated = mk_distributor(
        cand.p.clone(),
        cand.q.clone(),
        cand.r.clone(),
        cand.s.clone(),
        mutated_lens,
    )
    .unwrap();
    let outcome = verify_jump_structure(&mutated, &id_lens(&u.poly)).unwrap();
    match outcome {
        JumpOutcome::Obstructed { reason } => assert!(reason.contains("constant")),
        JumpOutcome::Verified(_) => panic!("mutated distributor must not verify"),
    }
}
