//! Monotone one-in-three satisfiability reduced to the abstract problem,
//! decided through vertex solutions and compared with exhaustive search.

use normsurf::abstract_problem::{
    brute_force_sat, check_compatible, construct_witness, decide_instance, extract_assignment, reduce_sat, ClauseSet,
};

fn main() {
    let sets = ["a b c\na d e\n", "a b c\nc d e\nb d f\n", "a b c\na b d\na c d\nb c d\n"];
    for text in sets {
        let c: ClauseSet = text.parse().expect("clause text");
        let inst = reduce_sat(&c).expect("at least two clauses");
        let compat = check_compatible(inst.p, &inst.equations).unwrap();
        let decision = decide_instance(&inst).unwrap();
        let oracle = brute_force_sat(&c).unwrap();
        println!(
            "{} clauses: p={} |M|={} compatible={} decided={} oracle={} rays={}",
            c.len(),
            inst.p,
            inst.equations.len(),
            compat.compatible,
            decision.answer,
            oracle.is_some(),
            decision.admissible_rays
        );
        if let Some(w) = &decision.witness {
            let t = extract_assignment(&c, w.coords()).expect("witness yields an assignment");
            let named: Vec<&str> = (0..c.variables()).filter(|&v| t[v]).map(|v| c.names[v].as_str()).collect();
            println!("  true variables from the vertex witness: {named:?}");
        }
        if let Some(t) = oracle {
            let x = construct_witness(&c, &t).unwrap();
            println!("  explicit witness admissible: {}", inst.is_m_admissible(&x));
        }
    }
}
