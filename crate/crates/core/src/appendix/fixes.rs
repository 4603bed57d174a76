//! Index corrections for printed summands that cannot be contracted
//! consistently. A summand may carry several independent entries. Signs, prefactors and the choice between ḡ and g̿ are never
//! touched: a summand that is wrong only in those stays wrong.

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Fix {
    pub coefficient: &'static str,
    /// Position in the coefficient's summand list.
    pub summand: usize,
    pub tag: &'static str,
    /// `(from, to)` substring replacements, applied in order to every occurrence.
    pub edits: &'static [(&'static str, &'static str)],
    pub reason: &'static str,
}

impl Fix {
    /// `coefficient.summand.tag`, e.g. `r1.3.lower`.
    pub fn id(&self) -> String {
        format!("{}.{}.{}", self.coefficient, self.summand, self.tag)
    }
}

const LOWER: &str = "ḡ differentiated inside a Christoffel bracket carries lower indices";

const fn lower(coefficient: &'static str, summand: usize, edits: &'static [(&'static str, &'static str)]) -> Fix {
    Fix {
        coefficient,
        summand,
        tag: "lower",
        edits,
        reason: LOWER,
    }
}

const fn fix(
    coefficient: &'static str,
    summand: usize,
    tag: &'static str,
    edits: &'static [(&'static str, &'static str)],
    reason: &'static str,
) -> Fix {
    Fix {
        coefficient,
        summand,
        tag,
        edits,
        reason,
    }
}

pub const FIXES: &[Fix] = &[
    lower("r1", 3, &[("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{l}[g_{jr}] + ∂_{j}[g_{lr}] - ∂_{r}[g_{jl}]")]),
    lower("r1", 4, &[("∂_{k}[∂_{l}[g^{jr}]] + ∂_{k}[∂_{j}[g^{lr}]] - ∂_{k}[∂_{r}[g^{jl}]]", "∂_{k}[∂_{l}[g_{jr}]] + ∂_{k}[∂_{j}[g_{lr}]] - ∂_{k}[∂_{r}[g_{jl}]]")]),
    lower("r1", 6, &[("∂_{α}[g^{kr}] + ∂_{k}[g^{αr}] - ∂_{r}[g^{kα}]", "∂_{α}[g_{kr}] + ∂_{k}[g_{αr}] - ∂_{r}[g_{kα}]")]),
    lower("r1", 7, &[("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{l}[g_{jr}] + ∂_{j}[g_{lr}] - ∂_{r}[g_{jl}]")]),
    lower("r1", 11, &[("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{l}[g_{kr}] + ∂_{k}[g_{lr}] - ∂_{r}[g_{kl}]")]),
    lower("r1", 12, &[("∂_{j}[∂_{l}[g^{kr}]] + ∂_{j}[∂_{k}[g^{lr}]] - ∂_{j}[∂_{r}[g^{kl}]]", "∂_{j}[∂_{l}[g_{kr}]] + ∂_{j}[∂_{k}[g_{lr}]] - ∂_{j}[∂_{r}[g_{kl}]]")]),
    lower("r1", 14, &[("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{l}[g_{kr}] + ∂_{k}[g_{lr}] - ∂_{r}[g_{kl}]")]),
    lower("r1", 15, &[("∂_{α}[g^{jr}] + ∂_{j}[g^{αr}] - ∂_{r}[g^{jα}]", "∂_{α}[g_{jr}] + ∂_{j}[g_{αr}] - ∂_{r}[g_{jα}]")]),
    lower("r2", 3, &[("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{l}[g_{jr}] + ∂_{j}[g_{lr}] - ∂_{r}[g_{jl}]")]),
    lower("r2", 4, &[("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{l}[g_{jr}] + ∂_{j}[g_{lr}] - ∂_{r}[g_{jl}]")]),
    lower("r2", 6, &[("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{l}[g_{jr}] + ∂_{j}[g_{lr}] - ∂_{r}[g_{jl}]")]),
    fix("r2", 7, "relabel", &[("1/2 g_{jl}", "1/2 g^{jl}"), ("∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]", "∂_{α}[G_{kr}] + ∂_{k}[G_{αr}] - ∂_{r}[G_{kα}]"), ("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{α}[g_{kr}] + ∂_{k}[g_{αr}] - ∂_{r}[g_{kα}]")], "the second Christoffel factor has its lower pair (k, α), printed as (k, l); g_{jl} contracts as g^{jl}"),
    fix("r2", 8, "relabel", &[("1/4 g_{jl}", "1/4 g^{jl}"), ("∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]", "∂_{α}[G_{kr}] + ∂_{k}[G_{αr}] - ∂_{r}[G_{kα}]"), ("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{α}[g_{kr}] + ∂_{k}[g_{αr}] - ∂_{r}[g_{kα}]"), ("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{l}[g_{jr}] + ∂_{j}[g_{lr}] - ∂_{r}[g_{jl}]")], "the trace factor has lower pair (k, α), printed as (k, l); g_{jl} contracts as g^{jl}"),
    lower("r2", 9, &[("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{l}[g_{jr}] + ∂_{j}[g_{lr}] - ∂_{r}[g_{jl}]")]),
    fix("r2", 10, "relabel", &[("- 1/2 g_{jλ}", "- 1/2 g^{jλ}"), ("∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]", "∂_{α}[G_{kr}] + ∂_{k}[G_{αr}] - ∂_{r}[G_{kα}]"), ("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{α}[g_{kr}] + ∂_{k}[g_{αr}] - ∂_{r}[g_{kα}]"), ("Γ^{k}_{kα}", "Γ^{α}_{jl}")], "trace factor with lower pair (k, α) paired with the base Christoffel on (j, l); g_{jλ} is the raised perturbation"),
    lower("r2", 13, &[("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{l}[g_{kr}] + ∂_{k}[g_{lr}] - ∂_{r}[g_{kl}]")]),
    lower("r2", 14, &[("∂_{j}[∂_{l}[g^{kr}]] + ∂_{j}[∂_{k}[g^{lr}]] - ∂_{j}[∂_{r}[g^{kl}]]", "∂_{j}[∂_{l}[g_{kr}]] + ∂_{j}[∂_{k}[g_{lr}]] - ∂_{j}[∂_{r}[g_{kl}]]")]),
    lower("r2", 16, &[("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{l}[g_{kr}] + ∂_{k}[g_{lr}] - ∂_{r}[g_{kl}]"), ("∂_{j}[∂_{l}[g^{kr}]] + ∂_{j}[∂_{k}[g^{lr}]] - ∂_{j}[∂_{r}[g^{kl}]]", "∂_{j}[∂_{l}[g_{kr}]] + ∂_{j}[∂_{k}[g_{lr}]] - ∂_{j}[∂_{r}[g_{kl}]]")]),
    fix("r2", 18, "relabel", &[("- 1/2 g_{jl}", "- 1/2 g^{jl}"), ("(∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}])", "(∂_{α}[G_{jr}] + ∂_{j}[G_{αr}] - ∂_{r}[G_{jα}])"), ("g^{αλ} G_{λσ} g^{σm} G_{mβ} g^{βr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])", "g^{kλ} G_{λσ} g^{σm} G_{mβ} g^{βr} (∂_{α}[g_{jr}] + ∂_{j}[g_{αr}] - ∂_{r}[g_{jα}])")], "both halves of the second-order Christoffel carry Γ^{k}_{jα}; g_{jl} contracts as g^{jl}"),
    lower("r2", 19, &[("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{l}[g_{kr}] + ∂_{k}[g_{lr}] - ∂_{r}[g_{kl}]")]),
    fix("r2", 20, "relabel", &[("1/4 g_{jl}", "1/4 g^{jl}"), ("g^{αλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}])", "g^{αλ} G_{λσ} g^{σr} (∂_{l}[g_{kr}] + ∂_{k}[g_{lr}] - ∂_{r}[g_{kl}])"), ("(∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}])", "(∂_{α}[G_{jr}] + ∂_{j}[G_{αr}] - ∂_{r}[G_{jα}])"), ("g^{kλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}])", "g^{kλ} G_{λσ} g^{σr} (∂_{α}[g_{jr}] + ∂_{j}[g_{αr}] - ∂_{r}[g_{jα}])")], "first factor is Γ^{α}_{kl} throughout, second is Γ^{k}_{jα}; g_{jl} contracts as g^{jl}"),
    fix("r2", 21, "relabel", &[("1/2 g_{jλ}", "1/2 g^{jλ}"), ("∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]", "∂_{α}[G_{jr}] + ∂_{j}[G_{αr}] - ∂_{r}[G_{jα}]"), ("∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]", "∂_{α}[g_{jr}] + ∂_{j}[g_{αr}] - ∂_{r}[g_{jα}]")], "the first-order Christoffel is Γ^{k}_{jα}, printed on (j, l); g_{jλ} is the raised perturbation"),
    lower("r2", 22, &[("∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]", "∂_{l}[g_{kr}] + ∂_{k}[g_{lr}] - ∂_{r}[g_{kl}]")]),
    lower("a1", 2, &[("∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}]", "∂_{β}[g_{αl}] + ∂_{α}[g_{βl}] - ∂_{l}[g_{αβ}]")]),
    lower("a2", 4, &[("∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}]", "∂_{β}[g_{αl}] + ∂_{α}[g_{βl}] - ∂_{l}[g_{αβ}]")]),
    lower("a2", 7, &[("∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}]", "∂_{β}[g_{αl}] + ∂_{α}[g_{βl}] - ∂_{l}[g_{αβ}]")]),
    lower("a2", 8, &[("∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}]", "∂_{β}[g_{αl}] + ∂_{α}[g_{βl}] - ∂_{l}[g_{αβ}]")]),
    lower("b1", 4, &[("∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}]", "∂_{q}[g_{pl}] + ∂_{p}[g_{ql}] - ∂_{l}[g_{pq}]")]),
    lower("b1", 5, &[("∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}]", "∂_{l}[g_{βj}] + ∂_{β}[g_{lj}] - ∂_{j}[g_{βl}]")]),
    lower("b1", 6, &[("∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}]", "∂_{q}[g_{pl}] + ∂_{p}[g_{ql}] - ∂_{l}[g_{pq}]")]),
    lower("b1", 7, &[("∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}]", "∂_{l}[g_{βj}] + ∂_{β}[g_{lj}] - ∂_{j}[g_{βl}]")]),
    fix("b2", 2, "relabel", &[("∂_{l}[g^{pj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{lβ}]", "∂_{l}[g_{βj}] + ∂_{β}[g_{lj}] - ∂_{j}[g_{lβ}]")], "the Christoffel bracket is on (β, l), printed with p in its first term; ḡ is lowered as elsewhere"),
    lower("b2", 3, &[("∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}]", "∂_{q}[g_{pl}] + ∂_{p}[g_{ql}] - ∂_{l}[g_{pq}]")]),
    lower("b2", 5, &[("∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}]", "∂_{l}[g_{βj}] + ∂_{β}[g_{lj}] - ∂_{j}[g_{βl}]")]),
    lower("b2", 6, &[("∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}]", "∂_{q}[g_{pl}] + ∂_{p}[g_{ql}] - ∂_{l}[g_{pq}]")]),
    lower("b2", 7, &[("∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}]", "∂_{l}[g_{βj}] + ∂_{β}[g_{lj}] - ∂_{j}[g_{βl}]"), ("∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}]", "∂_{q}[g_{pl}] + ∂_{p}[g_{ql}] - ∂_{l}[g_{pq}]")]),
    lower("d1", 2, &[("∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}]", "∂_{q}[g_{pk}] + ∂_{p}[g_{qk}] - ∂_{k}[g_{pq}]")]),
    lower("d1", 3, &[("∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}]", "∂_{β}[g_{αk}] + ∂_{α}[g_{βk}] - ∂_{k}[g_{αβ}]")]),
    lower("d2", 2, &[("∂_{β}[g^{αk}] + ∂_{α}[g^{βk}] - ∂_{k}[g^{αβ}]", "∂_{β}[g_{αk}] + ∂_{α}[g_{βk}] - ∂_{k}[g_{αβ}]")]),
    lower("d2", 3, &[("∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}]", "∂_{q}[g_{pk}] + ∂_{p}[g_{qk}] - ∂_{k}[g_{pq}]")]),
    lower("d2", 4, &[("∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}]", "∂_{β}[g_{αk}] + ∂_{α}[g_{βk}] - ∂_{k}[g_{αβ}]")]),
    lower("d2", 5, &[("∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}]", "∂_{q}[g_{pk}] + ∂_{p}[g_{qk}] - ∂_{k}[g_{pq}]")]),
    lower("d2", 7, &[("∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}]", "∂_{q}[g_{pk}] + ∂_{p}[g_{qk}] - ∂_{k}[g_{pq}]")]),
    lower("d2", 8, &[("∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}]", "∂_{β}[g_{αk}] + ∂_{α}[g_{βk}] - ∂_{k}[g_{αβ}]")]),
    lower("d2", 9, &[("∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}]", "∂_{β}[g_{αk}] + ∂_{α}[g_{βk}] - ∂_{k}[g_{αβ}]"), ("∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}]", "∂_{q}[g_{pk}] + ∂_{p}[g_{qk}] - ∂_{k}[g_{pq}]")]),
    fix("r1", 9, "relabel", &[("∂_{k}[g^{kr}]", "∂_{j}[g^{kr}]")], "the divergence term differentiates along j, printed along k"),
    fix("r2", 4, "stray-metric", &[("+ g_{jl} ∂_{k}[", "+ ∂_{k}["), ("- g_{jl} g^{kλ}", "- g^{kλ}")], "g_{jl} repeats labels already contracted by the leading perturbation"),
    fix("r2", 5, "relabel", &[("g^{σα} G_{αβ} g^{βl} Γ", "g^{σμ} G_{μβ} g^{βl} Γ")], "the inner dummy α of the second-order inverse collides with the Christoffel label"),
    fix("r2", 6, "raise", &[("1/2 g_{jl}", "1/2 g^{jl}")], "g_{jl} contracts two lower labels, so it is the inverse"),
    fix("r2", 9, "relabel", &[("- 1/2 g_{jλ}", "- 1/2 g^{jλ}"), ("Γ^{α}_{jl}", "Γ^{k}_{kα}")], "the base factor is the trace Γ^{k}_{kα}; g_{jλ} is the raised perturbation"),
    fix("r2", 11, "relabel", &[("∂_{k}[g^{kλ} G_{λσ} g^{σr}]", "∂_{j}[g^{kλ} G_{λσ} g^{σr}]")], "the divergence term differentiates along j, printed along k"),
    fix("r2", 13, "relabel", &[("∂_{k}[g^{kλ} G_{λσ} g^{σα} G_{αβ} g^{βr}]", "∂_{j}[g^{kλ} G_{λσ} g^{σα} G_{αβ} g^{βr}]")], "the divergence term differentiates along j, printed along k"),
    fix("r2", 16, "raise", &[("1/2 g_{jλ}", "1/2 g^{jλ}")], "the leading perturbation factor is raised"),
    fix("r2", 17, "relabel", &[("g^{σα} G_{αβ} g^{βl} Γ", "g^{σμ} G_{μβ} g^{βl} Γ")], "the inner dummy α of the second-order inverse collides with the Christoffel label"),
    fix("r2", 19, "relabel", &[("- 1/2 g_{jl}", "- 1/2 g^{jl}"), ("Γ^{k}_{kl}", "Γ^{k}_{jα}")], "the base factor is Γ^{k}_{jα}, printed as Γ^{k}_{kl}; g_{jl} contracts as g^{jl}"),
    fix("r2", 22, "raise", &[("1/2 g_{jλ}", "1/2 g^{jλ}")], "the leading perturbation factor is raised"),
    fix("a2", 8, "relabel", &[("∂_{l}[f2] g^{αλ} G_{λσ} g^{σl}]", "∂_{l}[f2] g^{jλ} G_{λσ} g^{σl}]")], "the perturbed inverse pairs the two probe gradients on (j, l)"),
    fix("b1", 7, "stray-factor", &[("∂_{p}[∂_{q}[f2]] ∂_{m}[f2]", "∂_{m}[f2]")], "the Hessian of f2 and its Christoffel correction are printed as a product"),
    fix("b2", 4, "relabel", &[("g^{lλ} G_{λσ} g^{σq}", "g^{lμ} G_{μν} g^{νq}")], "the two perturbation factors reuse the same dummy pair"),
    fix("d2", 2, "relabel", &[("G_{γm} g^{mβ} (", "G_{γm} g^{mk} (")], "the second-order inverse closes on the bracket label k"),
    fix("d2", 3, "relabel", &[("G_{γm} g^{mq} (", "G_{γm} g^{mk} (")], "the second-order inverse closes on the bracket label k"),
    fix("d2", 8, "missing-factor", &[("(g^{pλ} G_{λσ} g^{σq} (∂_{p}", "∂_{l}[f1] (g^{pλ} G_{λσ} g^{σq} (∂_{p}")], "the Christoffel contraction needs the gradient of f1, which is not printed"),
    fix("d2", 9, "relabel", &[("G_{γm} g^{mq} (", "G_{γm} g^{mk} (")], "the second-order inverse closes on the bracket label k"),
    fix("d2", 9, "missing-factor", &[("g^{pq} (-g^{rλ}", "∂_{l}[f1] g^{pq} (-g^{rλ}")], "the Christoffel contraction needs the gradient of f1, which is not printed"),
    fix("gamma2", 0, "relabel", &[("-g^{kl} G_{λσ}", "-g^{kλ} G_{λσ}")], "the perturbation factor contracts through λ"),
];
