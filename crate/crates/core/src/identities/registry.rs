//! Documentation table of the identities: label, statement, admissible
//! modes and default parameter ranges.

use serde::Serialize;

use super::{IdentityId, ModeKind};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegistryEntry {
    pub id: IdentityId,
    /// Display-equation label, e.g. `(3.9)`.
    pub equation: &'static str,
    pub statement: &'static str,
    pub modes: Vec<ModeKind>,
    pub default_ranges: &'static str,
}

fn row(id: IdentityId) -> (&'static str, &'static str, &'static str) {
    use IdentityId::*;
    match id {
        I22 => (
            "(2.2)",
            "S_{n+2}^[2](x) = (n+2)/(3(n+1)4^n) sum_i (3n-2i+2) 4^i C(2i,i) C(2n-2i,n-i) (x-1/2)^(2i) = (n+2)/(3 pi) int_0^pi (1-4x(1-x)sin^2(phi/2))^n (1+2cos^2(phi/2)) dphi",
            "operator index 2..=8; x in {0, 1/8, ..., 1}",
        ),
        I31 => (
            "(3.1)",
            "Hl(1/2,q;2q,1;1,1;x) = (1-x)^(-2q) 2F1(q,q;1;(x/(x-1))^2) = (1/pi) int_0^pi (1-4x(1-x)sin^2(phi/2))^(-q) dphi",
            "q in {-1/2, 1/2, -1, 1, 3/2}; x in {0.05, ..., 0.45}",
        ),
        I32 => (
            "(3.2)",
            "Hl(1/2,q;2q,1;1,1;x) = (1-2x)^(-q) 2F1(q,1-q;1;x^2/(2x-1))",
            "q in {-1/2, 1/2, -1, 1, 3/2}; x in {0.05, ..., 0.45}",
        ),
        I33 => ("(3.3)", "F_n(x) = Hl(1/2,-n;-2n,1;1,1;x)", "n in 0..=8"),
        I34 => (
            "(3.4)",
            "G_n(x) = Hl(1/2,n;2n,1;1,1;-x)",
            "n in 1..=8; x in {0.05, ..., 0.4} (n <= 4) or {0.05, ..., 0.2} (n > 4)",
        ),
        I35 => ("(3.5)", "G_n(-x) = (1-2x)^(1-2n) F_{n-1}(x)", "n in 1..=8"),
        I36 => ("(3.6)", "U_n(x) = F_n(x/(x+1))", "n in 0..=8"),
        I37 => ("(3.7)", "J_n(x) = ((1-x)/(1+x))^(2n+1) F_n(1/(1-x))", "n in 0..=8"),
        I38 => ("(3.8)", "2F1(-n,n+1;1;x) = P_n(1-2x)", "n in 0..=8"),
        I39 => ("(3.9)", "F_n(x) = (1-2x)^n P_n((2x^2-2x+1)/(1-2x))", "n in 0..=8"),
        I311_312 => (
            "(3.11)/(3.12)",
            "d/dx Hl(1/2,ab/2;a,b;g,g;x) = (ab/g)(1-2x) Hl(1/2,(a+2)(b+2)/2;a+2,b+2;g+1,g+1;x) = (ab/g)(1-2x)^(2g-a-b-1) Hl(1/2,(2g-a)(2g-b)/2;2g-a,2g-b;g+1,g+1;x)",
            "(a,b,g) in {(-2n,1,1): n=1..4} + {(2,1,1), (1/2,1,1), (3/2,1/2,2), (-1/2,5/2,3/2)}; x in {0.05, ..., 0.4}",
        ),
        I313 => ("(3.13)", "F_n'(x) = 2n(2x-1) Hl(1/2,3-3n;2-2n,3;2,2;x)", "n in 1..=8"),
        I314 => (
            "(3.14)",
            "Hl(1/2,(i-n)(2i+1);2(i-n),2i+1;i+1,i+1;x) = (2i)!!/(2i-1)!! 4^(-n) C(n,i)^(-1) sum_j 4^j C(i+j,i) C(2i+2j,i+j) C(2n-2i-2j,n-i-j) (x-1/2)^(2j)",
            "n in 0..=8, i in 0..=n",
        ),
        I42 => (
            "(4.2)",
            "d/dx HC(p,g,0,a,4pa;x) = -(s/g) HC(p,g+1,0,a+1,4p(a+1);x), s = 4pa",
            "(p,g,a) in {(n,1,1/2): n=1..3} + {(1,2,3/2), (1/2,3/2,1)}; x in {0.1, 0.3, 0.5, 0.8}",
        ),
        I43 => (
            "(4.3)",
            "d/dx HC(p,g,0,a,4pa;x) = (s/g)(x-1) HC(p,g+1,2,a+2,4p(a+1)-g-1;x), s = 4pa",
            "(p,g,a) in {(n,1,1/2): n=1..3} + {(1,2,3/2), (1/2,3/2,1)}; x in {0.1, 0.3, 0.5, 0.8}",
        ),
        I45 => ("(4.5)", "K_n(x) = HC(n,1,0,1/2,2n;x)", "n in 1..=3; x in {0.1, 0.25, 0.5, 0.9}"),
        I46 => ("(4.6)", "HC(n,2,2,5/2,6n-2;x) = K_n'(x)/(2n(x-1))", "n in 1..=3; x in {0.1, 0.3, 0.5, 0.8}"),
        I47 => ("(4.7)", "HC(n,2,0,3/2,6n;x) = -K_n'(x)/(2n)", "n in 1..=3; x in {0.1, 0.3, 0.5, 0.8}"),
        I48 => (
            "(4.8)",
            "HC(n,j+1,0,(2j+1)/2,2n(2j+1);x) = K_n^(j)(x)/K_n^(j)(0)",
            "n in 1..=3, j in 0..=8; x in {0.1, 0.3, 0.5, 0.8}",
        ),
        I49 => (
            "(4.9)",
            "K_n^(j)(0) = (-2n)^j sum_{i<=j/2} C(j,2i) C(2i,i) 4^(-i)",
            "n in 1..=3, j in 0..=8",
        ),
        I410 => (
            "(4.10)",
            "(K_n^(j))'' + (4n + (j+1)/x)(K_n^(j))' + (2n(2j+1)/x) K_n^(j) = 0",
            "n in 1..=3, j in 0..=8",
        ),
    }
}

/// One entry per [`IdentityId`], in enumeration order.
pub fn registry() -> Vec<RegistryEntry> {
    IdentityId::ALL
        .iter()
        .map(|&id| {
            let (equation, statement, default_ranges) = row(id);
            RegistryEntry {
                id,
                equation,
                statement,
                modes: id.admissible_modes().to_vec(),
                default_ranges,
            }
        })
        .collect()
}
