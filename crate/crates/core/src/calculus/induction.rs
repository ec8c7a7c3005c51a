//! A hand-written proof of the internal induction schema
//!
//! `|- C : c : (p0 & Box[0,oo) (p0 -> Box[0,1] p0)) -> Box[0,oo) p0`.
//!
//! After moving to an arbitrary `x0 >= c`, the cofinality axiom gives
//! `x0 < f^n(c)` for some `n`, and the recursion `R(k)` below yields
//! `Box[0,k+1] p0` at `c`, which covers `x0`.
//!
//! `R(k) = C : c : p0, C : c : H |- C : c : Box[0,k+1] p0`. The step splits
//! a fresh `x1 <= f^{k+1}(c)` by totality against `f^k(c)`: below or at
//! `f^k(c)` the hypothesis applies directly; above it, the hypothesis at
//! `f^k(c)` and `H` there give `Box[0,1] p0` at `f^k(c)`.

use super::proof::{OmegaTemplate, Proof, Recursion};

/// The same proof as a proof document.
pub const INDUCTION_PROOF_JSON: &str = include_str!("../../data/induction2.json");

pub const INDUCTION_SEQUENT: &str = "|- C : c : p0 & Box[0,oo) (p0 -> Box[0,1] p0) -> Box[0,oo) p0";

const P0: &str = "C : c : p0";
const H: &str = "C : c : Box[0,oo) (p0 -> Box[0,1] p0)";

fn seq(ante: &[&str], succ: &[&str]) -> String {
    match (ante.is_empty(), succ.is_empty()) {
        (true, true) => "|-".into(),
        (true, false) => format!("|- {}", succ.join(", ")),
        (false, true) => format!("{} |-", ante.join(", ")),
        (false, false) => format!("{} |- {}", ante.join(", "), succ.join(", ")),
    }
}

fn node(conclusion: String, rule: &str, premises: Vec<Proof>) -> Proof {
    Proof {
        conclusion,
        rule: rule.into(),
        params: Default::default(),
        premises,
        omega_template: None,
        recursion: None,
    }
}

fn weak_id(conclusion: String, f: &str) -> Proof {
    node(conclusion, "weakening", vec![node(seq(&[f], &[f]), "id", vec![])])
}

/// Internal axiom leaf under label `C`.
fn ax(conclusion: String, schema: &str, args: &[&str]) -> Proof {
    let mut p = node(conclusion, &format!("ax:{schema}"), vec![]).with_param("label", "C");
    for (k, a) in ["X", "Y", "Z"].iter().zip(args) {
        p = p.with_param(k, *a);
    }
    p
}

fn plus<'a>(base: &[&'a str], more: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(more).copied().collect()
}

pub fn induction_schema_proof() -> Proof {
    let and = "C : c : p0 & Box[0,oo) (p0 -> Box[0,1] p0)";
    let goal = "C : c : Box[0,oo) p0";
    let l0 = "C : c < x0 | c = x0";
    let bv = "C : bigvee(x0)";
    let g0 = "C : x0 : p0";
    let ctx = [P0, H, l0];
    let omega = Proof {
        omega_template: Some(OmegaTemplate { parameter: "n".into(), template: Box::new(below_bound()) }),
        ..node(seq(&plus(&ctx, &[bv]), &[g0]), "bigvee_l", vec![])
    };
    let cut = node(
        seq(&ctx, &[g0]),
        "cut",
        vec![
            node(seq(&ctx, &[bv, g0]), "weakening", vec![ax(seq(&[], &[bv]), "cofinal", &["x0"])]),
            omega,
        ],
    )
    .with_param("formula", bv);
    let boxed = node(seq(&[P0, H], &[goal]), "box_r", vec![cut]).with_param("var", "x0");
    let split = node(seq(&[and], &[goal]), "and_l", vec![boxed]);
    node(INDUCTION_SEQUENT.into(), "imp_r", vec![split])
}

/// `P(n)`: the case `x0 < f^n(c)`.
fn below_bound() -> Proof {
    let l0 = "C : c < x0 | c = x0";
    let ltn = "C : x0 < f^{n}(c)";
    let bn1 = "C : c : Box[0,{n+1}] p0";
    let un1 = "C : x0 < f^{n+1}(c) | x0 = f^{n+1}(c)";
    let lt1 = "C : x0 < f^{n+1}(c)";
    let eq1 = "C : x0 = f^{n+1}(c)";
    let fi = "C : f^{n}(c) < f^{n+1}(c)";
    let g0 = "C : x0 : p0";
    let gn = [P0, H, l0, ltn];
    let gb = plus(&gn, &[bn1]);
    let upper = node(
        seq(&gn, &[un1, g0]),
        "weakening",
        vec![node(
            seq(&[ltn], &[un1]),
            "or_r",
            vec![node(
                seq(&[ltn], &[lt1, eq1]),
                "weakening",
                vec![node(
                    seq(&[ltn], &[lt1]),
                    "cut",
                    vec![
                        node(seq(&[ltn], &[fi, lt1]), "weakening", vec![ax(seq(&[], &[fi]), "f_inc", &["f^{n}(c)"])]),
                        ax(seq(&[ltn, fi], &[lt1]), "trans", &["x0", "f^{n}(c)", "f^{n+1}(c)"]),
                    ],
                )
                .with_param("formula", fi)],
            )],
        )],
    );
    let use_box = node(
        seq(&gb, &[g0]),
        "box_l",
        vec![weak_id(seq(&gn, &[l0, g0]), l0), upper, weak_id(seq(&plus(&gn, &[g0]), &[g0]), g0)],
    )
    .with_param("term", "x0");
    let rec = Proof {
        recursion: Some(Recursion {
            parameter: "k".into(),
            argument: "{n}".into(),
            statement: seq(&[P0, H], &["C : c : Box[0,{k+1}] p0"]),
            base: Box::new(recursion_base()),
            step: Box::new(recursion_step()),
        }),
        ..node(seq(&[P0, H], &[bn1]), "recursion", vec![])
    };
    node(
        seq(&gn, &[g0]),
        "cut",
        vec![node(seq(&gn, &[bn1, g0]), "weakening", vec![rec]), use_box],
    )
    .with_param("formula", bn1)
}

fn recursion_base() -> Proof {
    let b1 = "C : c : Box[0,1] p0";
    let imp = "C : c : p0 -> Box[0,1] p0";
    let le = "C : c < c | c = c";
    let g = [P0, H];
    let lower = node(
        seq(&[P0], &[le, b1]),
        "weakening",
        vec![node(
            seq(&[], &[le]),
            "or_r",
            vec![node(
                seq(&[], &["C : c < c", "C : c = c"]),
                "weakening",
                vec![ax(seq(&[], &["C : c = c"]), "eq_refl", &["c"])],
            )],
        )],
    );
    let body = node(
        seq(&[P0, imp], &[b1]),
        "imp_l",
        vec![weak_id(seq(&[P0, b1], &[b1]), b1), weak_id(seq(&[P0], &[P0, b1]), P0)],
    );
    node(seq(&g, &[b1]), "box_l", vec![lower, body]).with_param("term", "c")
}

const D1: &str = "C : x1 < f^{k}(c)";
const D2: &str = "C : x1 = f^{k}(c)";
const D3: &str = "C : f^{k}(c) < x1";
const L1: &str = "C : c < x1 | c = x1";
const U1: &str = "C : x1 < f^{k+1}(c) | x1 = f^{k+1}(c)";
const G1: &str = "C : x1 : p0";
const IH: &str = "C : c : Box[0,{k}] p0";

fn recursion_step() -> Proof {
    let goal = "C : c : Box[0,{k+1}] p0";
    let g = [P0, H];
    let sigma = [P0, H, IH, L1, U1];
    let cascade = node(
        seq(&sigma, &[G1]),
        "cut",
        vec![
            node(
                seq(&sigma, &[D1, G1]),
                "cut",
                vec![
                    node(
                        seq(&sigma, &[D2, D1, G1]),
                        "cut",
                        vec![
                            node(
                                seq(&sigma, &[D3, D2, D1, G1]),
                                "weakening",
                                vec![ax(seq(&[], &[D1, D2, D3]), "total", &["x1", "f^{k}(c)"])],
                            ),
                            node(seq(&plus(&sigma, &[D3]), &[D2, D1, G1]), "weakening", vec![above()]),
                        ],
                    )
                    .with_param("formula", D3),
                    node(seq(&plus(&sigma, &[D2]), &[D1, G1]), "weakening", vec![within(D2)]),
                ],
            )
            .with_param("formula", D2),
            within(D1),
        ],
    )
    .with_param("formula", D1);
    let boxed = node(seq(&plus(&g, &[IH]), &[goal]), "box_r", vec![cascade]).with_param("var", "x1");
    node(
        seq(&g, &[goal]),
        "cut",
        vec![node(seq(&g, &[IH, goal]), "weakening", vec![node(seq(&g, &[IH]), "hypothesis", vec![])]), boxed],
    )
    .with_param("formula", IH)
}

/// `x1 <= f^k(c)`, read off the hypothesis.
fn within(d: &str) -> Proof {
    let uk = "C : x1 < f^{k}(c) | x1 = f^{k}(c)";
    let s = [P0, H, IH, L1, U1, d];
    let r = [P0, H, L1, U1, d];
    node(
        seq(&s, &[G1]),
        "box_l",
        vec![
            weak_id(seq(&r, &[L1, G1]), L1),
            node(seq(&r, &[uk, G1]), "weakening", vec![node(seq(&[d], &[uk]), "or_r", vec![weak_id(seq(&[d], &[D1, D2]), d)])]),
            weak_id(seq(&plus(&r, &[G1]), &[G1]), G1),
        ],
    )
    .with_param("term", "x1")
}

fn least(conclusion: String) -> Proof {
    let le = "C : c < f^{k}(c) | c = f^{k}(c)";
    node(
        conclusion,
        "weakening",
        vec![node(
            seq(&[], &[le]),
            "or_r",
            vec![ax(seq(&[], &["C : c < f^{k}(c)", "C : c = f^{k}(c)"]), "least", &["f^{k}(c)"])],
        )],
    )
}

/// `f^k(c) < x1`: one more step of `H` from `f^k(c)`.
fn above() -> Proof {
    let le = "C : c < f^{k}(c) | c = f^{k}(c)";
    let refl = "C : f^{k}(c) < f^{k}(c) | f^{k}(c) = f^{k}(c)";
    let pk = "C : f^{k}(c) : p0";
    let imp = "C : f^{k}(c) : p0 -> Box[0,1] p0";
    let qk = "C : f^{k}(c) : Box[0,1] p0";
    let lk = "C : f^{k}(c) < x1 | f^{k}(c) = x1";
    let eqk = "C : f^{k}(c) = x1";
    let s3 = [P0, H, IH, L1, U1, D3];
    // contexts after the hypothesis box, then H, are consumed
    let r3 = [P0, H, L1, U1, D3];
    let s3p = plus(&r3, &[pk]);
    let r3p = [P0, L1, U1, D3, pk];
    let s3q = plus(&r3p, &[qk]);
    let upper_ih = node(
        seq(&r3, &[refl, G1]),
        "weakening",
        vec![node(
            seq(&[], &[refl]),
            "or_r",
            vec![node(
                seq(&[], &["C : f^{k}(c) < f^{k}(c)", "C : f^{k}(c) = f^{k}(c)"]),
                "weakening",
                vec![ax(seq(&[], &["C : f^{k}(c) = f^{k}(c)"]), "eq_refl", &["f^{k}(c)"])],
            )],
        )],
    );
    let step_box = node(
        seq(&s3q, &[G1]),
        "box_l",
        vec![
            node(seq(&r3p, &[lk, G1]), "weakening", vec![node(seq(&[D3], &[lk]), "or_r", vec![weak_id(seq(&[D3], &[D3, eqk]), D3)])]),
            weak_id(seq(&r3p, &[U1, G1]), U1),
            weak_id(seq(&plus(&r3p, &[G1]), &[G1]), G1),
        ],
    )
    .with_param("term", "x1");
    let use_h = node(
        seq(&s3p, &[G1]),
        "box_l",
        vec![
            least(seq(&r3p, &[le, G1])),
            node(seq(&plus(&r3p, &[imp]), &[G1]), "imp_l", vec![step_box, weak_id(seq(&r3p, &[pk, G1]), pk)]),
        ],
    )
    .with_param("term", "f^{k}(c)");
    node(seq(&s3, &[G1]), "box_l", vec![least(seq(&r3, &[le, G1])), upper_ih, use_h]).with_param("term", "f^{k}(c)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, CheckConfig};

    #[test]
    fn checks() {
        let p = induction_schema_proof();
        for k in 0..=4 {
            if let Err(e) = check_proof(&p, &CheckConfig { omega_k: k }) {
                panic!("omega_k={k}: {e}");
            }
        }
    }

    #[test]
    fn bundled_document_is_current() {
        assert_eq!(INDUCTION_PROOF_JSON, induction_schema_proof().to_json());
    }
}
