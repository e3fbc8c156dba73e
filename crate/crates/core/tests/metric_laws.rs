use proptest::prelude::*;
use simrepair_core::corpus::{CorpusIndex, JavaLike, Role, SourceComponent, TokenKind};
use simrepair_core::metrics::{cosine, lcs_len, similarity, DeckardMode, MetricKind, MetricVector, ModelContext, TfidfModel};

/// Longest common subsequence by trying every subsequence of `a`.
fn brute_force_lcs(a: &[u8], b: &[u8]) -> usize {
    let is_subsequence = |sub: &[u8]| {
        let mut it = b.iter();
        sub.iter().all(|c| it.any(|d| d == c))
    };
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let sub: Vec<u8> = (0..a.len()).filter(|i| mask & (1 << i) != 0).map(|i| a[i]).collect();
        if sub.len() > best && is_subsequence(&sub) {
            best = sub.len();
        }
    }
    best
}

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "count", "value", "items", "size", "x", "result"]).prop_map(String::from)
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![ident(), (0u32..100).prop_map(|n| n.to_string()), Just("\"s\"".to_string())];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "*", "<", "=="]), inner.clone()).prop_map(|(l, op, r)| format!("{l} {op} {r}")),
            (ident(), prop::collection::vec(inner.clone(), 0..3)).prop_map(|(f, args)| format!("{f}({})", args.join(", "))),
            (inner.clone(), ident()).prop_map(|(o, f)| format!("{o}.{f}")),
            inner.prop_map(|e| format!("!({e})")),
        ]
    })
}

fn statement() -> impl Strategy<Value = String> {
    prop_oneof![
        (ident(), expr()).prop_map(|(l, r)| format!("{l} = {r};")),
        expr().prop_map(|e| format!("return {e};")),
        expr().prop_map(|e| format!("if ({e})")),
        (ident(), expr()).prop_map(|(v, e)| format!("int {v} = {e};")),
        (ident(), prop::collection::vec(expr(), 0..3)).prop_map(|(f, a)| format!("{f}({});", a.join(", "))),
    ]
}

fn component(text: &str) -> SourceComponent {
    SourceComponent::detached(&JavaLike, Role::Statement, "P.java", 1, text).unwrap()
}

fn context_for(texts: &[String]) -> ModelContext {
    let body: String = texts.iter().map(|t| format!("{t}\n")).collect();
    let src = format!("class P {{ void m() {{\n{body}}} }}");
    let corpus = CorpusIndex::from_sources(&JavaLike, vec![("P.java".into(), src)]).unwrap();
    let mut ctx = ModelContext::default();
    ctx.fit_tfidf(&corpus).unwrap();
    ctx
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lcs_matches_brute_force(a in prop::collection::vec(b'a'..b'e', 0..=12), b in prop::collection::vec(b'a'..b'e', 0..=12)) {
        prop_assert_eq!(lcs_len(&a, &b), brute_force_lcs(&a, &b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn symmetric_and_self_unit(a in statement(), b in statement()) {
        let ctx = context_for(&[a.clone(), b.clone()]);
        let (x, y) = (component(&a), component(&b));
        for kind in [MetricKind::Lcs, MetricKind::Tfidf, MetricKind::Deckard] {
            let xy = similarity(kind, &x, &y, &ctx).unwrap();
            let yx = similarity(kind, &y, &x, &ctx).unwrap();
            prop_assert!((xy - yx).abs() < 1e-9, "{kind}: {xy} vs {yx}");
            prop_assert!((0.0..=1.0).contains(&xy));
            let xx = similarity(kind, &x, &x, &ctx).unwrap();
            prop_assert!((xx - 1.0).abs() < 1e-9, "{kind}: self {xx}");
        }
    }

    #[test]
    fn idf_decreases_with_document_frequency(
        (n, df1, df2) in (2usize..30).prop_flat_map(|n| (Just(n), 1..n)).prop_flat_map(|(n, df1)| (Just(n), Just(df1), df1 + 1..=n))
    ) {
        let docs: Vec<Vec<&str>> = (0..n)
            .map(|i| {
                let mut d = vec!["filler"];
                if i < df1 { d.push("first") }
                if i < df2 { d.push("second") }
                d
            })
            .collect();
        let model = TfidfModel::fit(&docs).unwrap();
        prop_assert!(model.idf("first") > model.idf("second"));
    }

    #[test]
    fn cosine_is_scale_invariant(
        u in prop::collection::vec(-5.0f32..5.0, 8),
        v in prop::collection::vec(-5.0f32..5.0, 8),
        c in 0.01f64..100.0,
    ) {
        let (u, v) = (MetricVector::Doc2vec(u), MetricVector::Doc2vec(v));
        prop_assume!(!u.is_zero() && !v.is_zero());
        let base = cosine(&u, &v).unwrap();
        let scaled = cosine(&u.scaled(c), &v).unwrap();
        prop_assert!((base - scaled).abs() < 1e-6, "{base} vs {scaled}");
        prop_assert!((cosine(&v, &u).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn tfidf_cosine_is_scale_invariant(a in statement(), b in statement(), c in 0.01f64..100.0) {
        let model = TfidfModel::fit(&[component(&a).token_texts().collect::<Vec<_>>()]).unwrap();
        let u = model.transform(&component(&a).token_texts().collect::<Vec<_>>()).vector;
        let v = model.transform(&component(&b).token_texts().collect::<Vec<_>>()).vector;
        let base = cosine(&u, &v).unwrap();
        prop_assert!((cosine(&u.scaled(c), &v).unwrap() - base).abs() < 1e-9);
    }

    #[test]
    fn deckard_ignores_identifier_names(s in statement(), salt in 0u32..1000) {
        let original = component(&s);
        let renamed_text: String = original
            .tokens
            .iter()
            .map(|t| if t.kind == TokenKind::Identifier { format!("{}_r{salt} ", t.text) } else { format!("{} ", t.text) })
            .collect();
        let renamed = component(&renamed_text);
        for mode in [DeckardMode::Kinds, DeckardMode::KindsAndPairs] {
            prop_assert_eq!(
                simrepair_core::metrics::deckard_vector(&original.ast, mode),
                simrepair_core::metrics::deckard_vector(&renamed.ast, mode)
            );
        }
    }

    #[test]
    fn deckard_counts_sum_to_node_count(s in statement()) {
        let c = component(&s);
        let v = simrepair_core::metrics::deckard_vector(&c.ast, DeckardMode::Kinds);
        prop_assert_eq!(v.iter().map(|&n| n as usize).sum::<usize>(), c.ast.node_count());
    }

    #[test]
    fn equivalence_is_reflexive_symmetric_transitive(a in statement(), b in statement(), c in statement()) {
        let (x, y, z) = (component(&a), component(&b), component(&c));
        prop_assert!(x.equivalent(&x));
        prop_assert_eq!(x.equivalent(&y), y.equivalent(&x));
        if x.equivalent(&y) && y.equivalent(&z) {
            prop_assert!(x.equivalent(&z));
        }
        // reformatting keeps equivalence
        let spaced = component(&a.replace(' ', "  "));
        prop_assert!(x.equivalent(&spaced));
    }
}
