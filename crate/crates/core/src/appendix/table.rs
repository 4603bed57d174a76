//! Summands as printed, one string per top-level term, grouped by the line
//! of the display they start on. Bracket repairs and index fixes live in
//! the parent module; nothing here is corrected.

pub(super) struct Printed {
    pub line: u8,
    pub text: &'static str,
}

const fn s(line: u8, text: &'static str) -> Printed {
    Printed { line, text }
}

pub(super) const R0: &[Printed] = &[
    // line 1
    s(1, "g^{jl} ∂_{k}[Γ^{k}_{jl}]"),
    s(1, "g^{jl} Γ^{α}_{jl} Γ^{k}_{kα}"),
    s(1, "- g^{jl} ∂_{j}[Γ^{k}_{kl}]"),
    s(1, "g^{jl} Γ^{α}_{kl} Γ^{k}_{jα}"),
];

pub(super) const R1: &[Printed] = &[
    // line 1
    s(1, "- ∂_{k}[Γ^{k}_{jl}] g^{jλ} G_{λσ} g^{σl}"),
    s(1, "1/2 g^{jl} ∂_{k}[g^{kr}] (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}])"),
    s(1, "1/2 g^{jl} g^{kr} (∂_{k}[∂_{l}[G_{jr}]] + ∂_{k}[∂_{j}[G_{lr}]] - ∂_{k}[∂_{r}[G_{jl}]])"),
    // line 2
    s(2, "- 1/2 g^{jl} ∂_{k}[g^{kλ} G_{λσ} g^{σr}] (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}])"),
    s(2, "- 1/2 g^{jl} g^{kλ} G_{λσ} g^{σr} (∂_{k}[∂_{l}[g^{jr}]] + ∂_{k}[∂_{j}[g^{lr}]] - ∂_{k}[∂_{r}[g^{jl}]])"),
    // line 3
    s(3, "- g^{jλ} G_{λσ} g^{σl} Γ^{α}_{jl} Γ^{k}_{kα}"),
    s(3, "1/2 g^{jl} Γ^{α}_{jl} (g^{kr} (∂_{α}[G_{kr}] + ∂_{k}[G_{αr}] - ∂_{r}[G_{kα}]) - g^{kλ} G_{λσ} g^{σr} (∂_{α}[g^{kr}] + ∂_{k}[g^{αr}] - ∂_{r}[g^{kα}]))"),
    // line 4
    s(4, "1/2 g^{jl} (g^{αr} (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) - g^{αλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}])) Γ^{k}_{kα}"),
    s(4, "g^{jλ} G_{λσ} g^{σl} ∂_{j}[Γ^{k}_{kl}]"),
    // line 5
    s(5, "- 1/2 g^{jl} ∂_{k}[g^{kr}] (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}])"),
    s(5, "- 1/2 g^{jl} g^{kr} (∂_{j}[∂_{l}[G_{kr}]] + ∂_{j}[∂_{k}[G_{lr}]] - ∂_{j}[∂_{r}[G_{kl}]])"),
    s(5, "1/2 g^{jl} ∂_{j}[g^{kλ} G_{λσ} g^{σr}] (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])"),
    // line 6
    s(6, "1/2 g^{jl} g^{kλ} G_{λσ} g^{σr} (∂_{j}[∂_{l}[g^{kr}]] + ∂_{j}[∂_{k}[g^{lr}]] - ∂_{j}[∂_{r}[g^{kl}]])"),
    s(6, "g^{jλ} G_{λσ} g^{σl} Γ^{α}_{kl} Γ^{k}_{jα}"),
    // line 7
    s(7, "- 1/2 g^{jl} (g^{αr} (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) - g^{αλ} G_{λσ} g^{σr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])) Γ^{k}_{jα}"),
    // line 8
    s(8, "- 1/2 g^{jl} Γ^{α}_{kl} (g^{kr} (∂_{α}[G_{jr}] + ∂_{j}[G_{αr}] - ∂_{r}[G_{jα}]) - g^{kλ} G_{λσ} g^{σr} (∂_{α}[g^{jr}] + ∂_{j}[g^{αr}] - ∂_{r}[g^{jα}]))"),
];

pub(super) const R2: &[Printed] = &[
    // line 1
    s(1, "∂_{k}[Γ^{k}_{jl}] g^{jλ} G_{λσ} g^{σα} G_{αβ} g^{βl}"),
    s(1, "- 1/2 g^{jl} ∂_{k}[g^{kλ} G_{λσ} g^{σr}] (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}])"),
    s(1, "- 1/2 g^{jl} g^{kλ} G_{λσ} g^{σr} (∂_{k}[∂_{l}[G_{jr}]] + ∂_{k}[∂_{j}[G_{lr}]] - ∂_{k}[∂_{r}[G_{jl}]])"),
    // line 2
    s(2, "1/2 g^{jl} (∂_{k}[g^{kλ} G_{λσ} g^{σα} G_{αβ} g^{βr}] (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]) + g^{kλ} G_{λσ} g^{σα} G_{αβ} g^{βr} (∂_{k}[∂_{l}[G_{jr}]] + ∂_{k}[∂_{j}[G_{lr}]] - ∂_{k}[∂_{r}[G_{jl}]]))"),
    // line 3
    s(3, "- 1/2 g^{jλ} G_{λσ} g^{σl} (∂_{k}[g^{kr}] (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) + g^{kr} (∂_{k}[∂_{l}[G_{jr}]] + ∂_{k}[∂_{j}[G_{lr}]] - ∂_{k}[∂_{r}[G_{jl}]]) + g_{jl} ∂_{k}[g^{kλ} G_{λσ} g^{σr}] (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]) - g_{jl} g^{kλ} G_{λσ} g^{σr} (∂_{k}[∂_{l}[G_{jr}]] + ∂_{k}[∂_{j}[G_{lr}]] - ∂_{k}[∂_{r}[G_{jl}]]))"),
    // line 5
    s(5, "g^{jλ} G_{λσ} g^{σα} G_{αβ} g^{βl} Γ^{α}_{jl} Γ^{k}_{kα}"),
    s(5, "1/2 g_{jl} (-g^{αλ} G_{λσ} g^{σr} (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) + g^{αλ} G_{λσ} g^{σk} G_{kβ} g^{βr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}])) Γ^{k}_{kα}"),
    // line 6
    s(6, "1/2 g_{jl} Γ^{α}_{jl} (-g^{kλ} G_{λσ} g^{σr} (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) + g^{kλ} G_{λσ} g^{σm} G_{mβ} g^{βr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]))"),
    // line 7
    s(7, "1/4 g_{jl} (g^{kr} (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) - g^{kλ} G_{λσ} g^{σr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])) (g^{αr} (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) - g^{αλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]))"),
    // line 8
    s(8, "- 1/2 g_{jλ} G_{λσ} g^{σl} Γ^{α}_{jl} (g^{αr} (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) - g^{αλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]))"),
    // line 9
    s(9, "- 1/2 g_{jλ} G_{λσ} g^{σl} (g^{kr} (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) - g^{kλ} G_{λσ} g^{σr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])) Γ^{k}_{kα}"),
    // line 11
    s(11, "1/2 g^{jl} ∂_{k}[g^{kλ} G_{λσ} g^{σr}] (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}])"),
    s(11, "1/2 g^{jl} g^{kλ} G_{λσ} g^{σr} (∂_{j}[∂_{l}[G_{kr}]] + ∂_{j}[∂_{k}[G_{lr}]] - ∂_{j}[∂_{r}[G_{kl}]])"),
    // line 12
    s(12, "- 1/2 g^{jl} ∂_{k}[g^{kλ} G_{λσ} g^{σα} G_{αβ} g^{βr}] (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])"),
    s(12, "- 1/2 g^{jl} g^{kλ} G_{λσ} g^{σα} G_{αβ} g^{βr} (∂_{j}[∂_{l}[g^{kr}]] + ∂_{j}[∂_{k}[g^{lr}]] - ∂_{j}[∂_{r}[g^{kl}]])"),
    // line 13
    s(13, "- g^{jλ} G_{λσ} g^{σα} G_{αβ} g^{βl} ∂_{j}[Γ^{k}_{kl}]"),
    s(13, "1/2 g_{jλ} G_{λσ} g^{σl} (∂_{j}[g^{kr}] (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) + g^{kr} (∂_{j}[∂_{l}[G_{kr}]] + ∂_{j}[∂_{k}[G_{lr}]] - ∂_{j}[∂_{r}[G_{kl}]]) - ∂_{j}[g^{kλ} G_{λσ} g^{σr}] (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]) - g^{kλ} G_{λσ} g^{σr} (∂_{j}[∂_{l}[g^{kr}]] + ∂_{j}[∂_{k}[g^{lr}]] - ∂_{j}[∂_{r}[g^{kl}]]))"),
    // line 15
    s(15, "- g^{jλ} G_{λσ} g^{σα} G_{αβ} g^{βl} Γ^{α}_{kl} Γ^{k}_{jα}"),
    s(15, "- 1/2 g_{jl} Γ^{α}_{kl} (-g^{kλ} G_{λσ} g^{σr} (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) + g^{αλ} G_{λσ} g^{σm} G_{mβ} g^{βr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}]))"),
    // line 16
    s(16, "- 1/2 g_{jl} (-g^{αλ} G_{λσ} g^{σr} (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) + g^{αλ} G_{λσ} g^{σm} G_{mβ} g^{βr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])) Γ^{k}_{kl}"),
    // line 17
    s(17, "1/4 g_{jl} (g^{αr} (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) - g^{αλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}])) (g^{kr} (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) - g^{kλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]))"),
    // line 18
    s(18, "1/2 g_{jλ} G_{λσ} g^{σl} Γ^{α}_{kl} (g^{kr} (∂_{l}[G_{jr}] + ∂_{j}[G_{lr}] - ∂_{r}[G_{jl}]) - g^{kλ} G_{λσ} g^{σr} (∂_{l}[g^{jr}] + ∂_{j}[g^{lr}] - ∂_{r}[g^{jl}]))"),
    // line 19
    s(19, "1/2 g_{jλ} G_{λσ} g^{σl} (g^{αr} (∂_{l}[G_{kr}] + ∂_{k}[G_{lr}] - ∂_{r}[G_{kl}]) - g^{αλ} G_{λσ} g^{σr} (∂_{l}[g^{kr}] + ∂_{k}[g^{lr}] - ∂_{r}[g^{kl}])) Γ^{k}_{jα}"),
];

pub(super) const A0: &[Printed] = &[
    // line 1
    s(1, "(-g^{αβ} (∂_{α}[∂_{β}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]] - Γ^{k}_{αβ} ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]))"),
];

pub(super) const A1: &[Printed] = &[
    // line 1
    s(1, "g^{αβ} ∂_{α}[∂_{β}[∂_{j}[f1] ∂_{l}[f2] g^{jλ} G_{λσ} g^{σl}]]"),
    s(1, "- g^{αβ} Γ^{k}_{αβ} ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jλ} G_{λσ} g^{σl}]"),
    // line 2
    s(2, "1/2 g^{αβ} (g^{kl} (∂_{β}[G_{αl}] + ∂_{α}[G_{βl}] - ∂_{l}[G_{αβ}]) - g^{kλ} G_{λσ} g^{σl} (∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}])) ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]"),
    // line 3
    s(3, "g^{αλ} G_{λσ} g^{σβ} ∂_{α}[∂_{β}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]]"),
    s(3, "- g^{αλ} G_{λσ} g^{σβ} Γ^{k}_{αβ} ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]"),
];

pub(super) const A2: &[Printed] = &[
    // line 1
    s(1, "g^{αλ} G_{λσ} g^{σl} G_{lj} g^{jβ} ∂_{α}[∂_{β}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]]"),
    s(1, "g^{αβ} ∂_{α}[∂_{β}[∂_{j}[f1] ∂_{l}[f2] g^{jλ} G_{λσ} g^{σα} G_{αβ} g^{βl}]]"),
    s(1, "- g^{αλ} G_{λσ} g^{σl} G_{lj} g^{jβ} Γ^{k}_{αβ} ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]"),
    // line 2
    s(2, "- g^{αβ} Γ^{k}_{αβ} ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jλ} G_{λσ} g^{σα} G_{αβ} g^{βl}]"),
    s(2, "1/2 g^{αβ} (-g^{kλ} G_{λσ} g^{σl} (∂_{β}[G_{αl}] + ∂_{α}[G_{βl}] - ∂_{l}[G_{αβ}]) + g^{kλ} G_{λσ} g^{σi} G_{ij} g^{jl} (∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}])) ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]"),
    // line 3
    s(3, "- g^{αλ} G_{λσ} g^{σβ} ∂_{α}[∂_{β}[∂_{j}[f1] ∂_{l}[f2] g^{jλ} G_{λσ} g^{σl}]]"),
    // line 4
    s(4, "- g^{αλ} G_{λσ} g^{σβ} Γ^{k}_{αβ} ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jλ} G_{λσ} g^{σl}]"),
    s(4, "1/2 g^{αλ} G_{λσ} g^{σβ} (g^{kl} (∂_{β}[G_{αl}] + ∂_{α}[G_{βl}] - ∂_{l}[G_{αβ}]) - g^{kλ} G_{λσ} g^{σl} (∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}])) ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{jl}]"),
    // line 5
    s(5, "1/2 g^{αβ} (g^{kl} (∂_{β}[G_{αl}] + ∂_{α}[G_{βl}] - ∂_{l}[G_{αβ}]) - g^{kλ} G_{λσ} g^{σl} (∂_{β}[g^{αl}] + ∂_{α}[g^{βl}] - ∂_{l}[g^{αβ}])) ∂_{k}[∂_{j}[f1] ∂_{l}[f2] g^{αλ} G_{λσ} g^{σl}]"),
];

pub(super) const B0: &[Printed] = &[
    // line 1
    s(1, "(∂_{l}[∂_{β}[f1]] - ∂_{k}[f1] Γ^{k}_{βl}) (∂_{p}[∂_{q}[f2]] - ∂_{m}[f2] Γ^{m}_{pq}) g^{βp} g^{lq}"),
];

pub(super) const B1: &[Printed] = &[
    // line 1
    s(1, "- ∂_{l}[∂_{β}[f1]] ∂_{p}[∂_{q}[f2]] (g^{βλ} G_{λσ} g^{σp} g^{lq} + g^{βp} g^{lλ} G_{λσ} g^{σq})"),
    s(1, "∂_{l}[∂_{β}[f1]] ∂_{m}[f2] Γ^{m}_{pq} (g^{βλ} G_{λσ} g^{σp} g^{lq} + g^{βp} g^{lλ} G_{λσ} g^{σq})"),
    // line 2
    s(2, "∂_{k}[f1] Γ^{k}_{βl} ∂_{p}[∂_{q}[f2]] (g^{βλ} G_{λσ} g^{σp} g^{lq} + g^{βp} g^{lλ} G_{λσ} g^{σq})"),
    s(2, "∂_{k}[f1] Γ^{k}_{βl} ∂_{m}[f2] Γ^{m}_{pq} (g^{βλ} G_{λσ} g^{σp} g^{lq} + g^{βp} g^{lλ} G_{λσ} g^{σq})"),
    // line 3
    s(3, "- 1/2 ∂_{l}[∂_{β}[f1]] ∂_{m}[f2] (g^{ml} (∂_{q}[G_{pl}] + ∂_{p}[G_{ql}] - ∂_{l}[G_{pq}]) - g^{mλ} G_{λσ} g^{σl} (∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}])) g^{βp} g^{lq}"),
    // line 4
    s(4, "- 1/2 ∂_{k}[f1] (g^{kj} (∂_{l}[G_{βj}] + ∂_{β}[G_{lj}] - ∂_{j}[G_{βl}]) - g^{kλ} G_{λσ} g^{σj} (∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}])) ∂_{p}[∂_{q}[f2]] g^{βp} g^{lq}"),
    // line 5
    s(5, "1/2 ∂_{k}[f1] Γ^{k}_{βl} ∂_{m}[f2] (g^{ml} (∂_{q}[G_{pl}] + ∂_{p}[G_{ql}] - ∂_{l}[G_{pq}]) - g^{mλ} G_{λσ} g^{σl} (∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}])) g^{βp} g^{lq}"),
    // line 6
    s(6, "1/2 ∂_{k}[f1] (g^{kj} (∂_{l}[G_{βj}] + ∂_{β}[G_{lj}] - ∂_{j}[G_{βl}]) - g^{kλ} G_{λσ} g^{σj} (∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}])) ∂_{p}[∂_{q}[f2]] ∂_{m}[f2] Γ^{m}_{pq} g^{βp} g^{lq}"),
];

pub(super) const B2: &[Printed] = &[
    // line 1
    s(1, "(∂_{l}[∂_{β}[f1]] - ∂_{k}[f1] Γ^{k}_{βl}) (∂_{p}[∂_{q}[f2]] - ∂_{m}[f2] Γ^{m}_{pq}) g^{βλ} G_{λσ} g^{σα} G_{αγ} g^{γp} g^{lq}"),
    s(1, "(∂_{l}[∂_{β}[f1]] - ∂_{k}[f1] Γ^{k}_{βl}) (∂_{p}[∂_{q}[f2]] - ∂_{m}[f2] Γ^{m}_{pq}) g^{βp} g^{lλ} G_{λσ} g^{σα} G_{αγ} g^{γq}"),
    // line 2
    s(2, "- 1/2 ∂_{k}[f1] (-g^{kλ} G_{λσ} g^{σj} (∂_{l}[G_{βj}] + ∂_{β}[G_{lj}] - ∂_{j}[G_{βl}]) + g^{kλ} G_{λσ} g^{σα} G_{αγ} g^{γj} (∂_{l}[g^{pj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{lβ}])) (∂_{p}[∂_{q}[f2]] - ∂_{m}[f2] Γ^{m}_{pq}) g^{βp} g^{lq}"),
    // line 3
    s(3, "- 1/2 (∂_{l}[∂_{β}[f1]] - ∂_{k}[f1] Γ^{k}_{βl}) ∂_{m}[f2] (-g^{mλ} G_{λσ} g^{σl} (∂_{q}[G_{pl}] + ∂_{p}[G_{ql}] - ∂_{l}[G_{pq}]) + g^{mλ} G_{λσ} g^{σα} G_{αγ} g^{γl} (∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}])) g^{βp} g^{lq}"),
    // line 5
    s(5, "(∂_{l}[∂_{β}[f1]] - ∂_{k}[f1] Γ^{k}_{βl}) (∂_{p}[∂_{q}[f2]] - ∂_{m}[f2] Γ^{m}_{pq}) g^{βλ} G_{λσ} g^{σp} g^{lλ} G_{λσ} g^{σq}"),
    s(5, "1/2 ∂_{k}[f1] (g^{kj} (∂_{l}[G_{βj}] + ∂_{β}[G_{lj}] - ∂_{j}[G_{βl}]) - g^{kλ} G_{λσ} g^{σj} (∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}])) (∂_{p}[∂_{q}[f2]] - ∂_{m}[f2] Γ^{m}_{pq}) (g^{βλ} G_{λσ} g^{σp} g^{lq} + g^{βp} g^{lλ} G_{λσ} g^{σq})"),
    // line 7
    s(7, "1/2 (∂_{l}[∂_{β}[f1]] - ∂_{k}[f1] Γ^{k}_{βl}) ∂_{m}[f2] (g^{ml} (∂_{q}[G_{pl}] + ∂_{p}[G_{ql}] - ∂_{l}[G_{pq}]) - g^{mλ} G_{λσ} g^{σl} (∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}])) (g^{βλ} G_{λσ} g^{σp} g^{lq} + g^{βp} g^{lλ} G_{λσ} g^{σq})"),
    // line 8
    s(8, "1/4 ∂_{k}[f1] (g^{kj} (∂_{l}[G_{βj}] + ∂_{β}[G_{lj}] - ∂_{j}[G_{βl}]) - g^{kλ} G_{λσ} g^{σj} (∂_{l}[g^{βj}] + ∂_{β}[g^{lj}] - ∂_{j}[g^{βl}])) ∂_{m}[f2] (g^{ml} (∂_{q}[G_{pl}] + ∂_{p}[G_{ql}] - ∂_{l}[G_{pq}]) - g^{mλ} G_{λσ} g^{σl} (∂_{q}[g^{pl}] + ∂_{p}[g^{ql}] - ∂_{l}[g^{pq}])) g^{βp} g^{lq}"),
];

pub(super) const D0: &[Printed] = &[
    // line 1
    s(1, "(g^{αβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) (g^{pq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
];

pub(super) const D1: &[Printed] = &[
    // line 1
    s(1, "(-g^{αλ} G_{λσ} g^{σβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) (g^{pq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    s(1, "(-g^{αβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) (g^{pλ} G_{λσ} g^{σq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    // line 2
    s(2, "- 1/2 (g^{αβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) g^{pq} (g^{kr} (∂_{q}[G_{pk}] + ∂_{p}[G_{qk}] - ∂_{k}[G_{pq}]) - g^{rλ} G_{λσ} g^{σk} (∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}])) ∂_{r}[f2]"),
    // line 3
    s(3, "- 1/2 (g^{αβ} (g^{lk} (∂_{β}[G_{αk}] + ∂_{α}[G_{βk}] - ∂_{k}[G_{αβ}]) - g^{lλ} G_{λσ} g^{σk} (∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}])) ∂_{l}[f1]) (g^{pq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
];

pub(super) const D2: &[Printed] = &[
    // line 1
    s(1, "(g^{αλ} G_{λσ} g^{σγ} G_{γm} g^{mβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) (g^{pq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    s(1, "(g^{αβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) (g^{pλ} G_{λσ} g^{σγ} G_{γm} g^{mq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    // line 2
    s(2, "- 1/2 g^{αβ} (-g^{lλ} G_{λσ} g^{σk} (∂_{β}[G_{αk}] + ∂_{α}[G_{βk}] - ∂_{k}[G_{αβ}]) + g^{lλ} G_{λσ} g^{σγ} G_{γm} g^{mβ} (∂_{β}[g^{αk}] + ∂_{α}[g^{βk}] - ∂_{k}[g^{αβ}])) ∂_{l}[f1] (g^{pq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    // line 4
    s(4, "- 1/2 (g^{αβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) g^{pq} (-g^{rλ} G_{λσ} g^{σk} (∂_{q}[G_{pk}] + ∂_{p}[G_{qk}] - ∂_{k}[G_{pq}]) + g^{rλ} G_{λσ} g^{σγ} G_{γm} g^{mq} (∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}])) ∂_{r}[f2]"),
    // line 5
    s(5, "1/2 g^{αλ} G_{λσ} g^{σβ} (g^{lk} (∂_{β}[G_{αk}] + ∂_{α}[G_{βk}] - ∂_{k}[G_{αβ}]) - g^{lλ} G_{λσ} g^{σk} (∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}])) ∂_{l}[f1] (g^{pq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    // line 6
    s(6, "1/2 (g^{αβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) g^{pλ} G_{λσ} g^{σq} (g^{kr} (∂_{q}[G_{pk}] + ∂_{p}[G_{qk}] - ∂_{k}[G_{pq}]) - g^{rλ} G_{λσ} g^{σk} (∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}])) ∂_{r}[f2]"),
    // line 8
    s(8, "(g^{αλ} G_{λσ} g^{σβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1])) (g^{pλ} G_{λσ} g^{σq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    // line 9
    s(9, "1/2 g^{αλ} G_{λσ} g^{σβ} (∂_{α}[∂_{β}[f1]] - Γ^{l}_{αβ} ∂_{l}[f1]) g^{pq} (g^{kr} (∂_{q}[G_{pk}] + ∂_{p}[G_{qk}] - ∂_{k}[G_{pq}]) - g^{rλ} G_{λσ} g^{σk} (∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}])) ∂_{r}[f2]"),
    // line 10
    s(10, "1/2 g^{αβ} (g^{lk} (∂_{β}[G_{αk}] + ∂_{α}[G_{βk}] - ∂_{k}[G_{αβ}]) - g^{lλ} G_{λσ} g^{σk} (∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}])) (g^{pλ} G_{λσ} g^{σq} (∂_{p}[∂_{q}[f2]] - Γ^{r}_{pq} ∂_{r}[f2]))"),
    // line 11
    s(11, "1/4 g^{αβ} (g^{lk} (∂_{β}[G_{αk}] + ∂_{α}[G_{βk}] - ∂_{k}[G_{αβ}]) - g^{lλ} G_{λσ} g^{σk} (∂_{β}[g^{lk}] + ∂_{l}[g^{βk}] - ∂_{k}[g^{lβ}])) g^{pq} (-g^{rλ} G_{λσ} g^{σk} (∂_{q}[G_{pk}] + ∂_{p}[G_{qk}] - ∂_{k}[G_{pq}]) + g^{rλ} G_{λσ} g^{σγ} G_{γm} g^{mq} (∂_{q}[g^{pk}] + ∂_{p}[g^{qk}] - ∂_{k}[g^{pq}])) ∂_{r}[f2]"),
];

pub(super) const GAMMA1: &[Printed] = &[
    // line 1
    s(1, "1/2 (g^{kl} (∂_{j}[G_{il}] + ∂_{i}[G_{jl}] - ∂_{l}[G_{ij}]) - g^{kλ} G_{λσ} g^{σl} (∂_{j}[g_{il}] + ∂_{i}[g_{jl}] - ∂_{l}[g_{ij}]))"),
];

pub(super) const GAMMA2: &[Printed] = &[
    // line 1
    s(1, "1/2 (-g^{kl} G_{λσ} g^{σl} (∂_{j}[G_{il}] + ∂_{i}[G_{jl}] - ∂_{l}[G_{ij}]) + g^{kλ} G_{λσ} g^{σα} G_{αβ} g^{βl} (∂_{j}[g_{il}] + ∂_{i}[g_{jl}] - ∂_{l}[g_{ij}]))"),
];
