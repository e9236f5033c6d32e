//! One document per rule on each side of its threshold.
//!
//! Each fixture is a parameterized text; the parameter is scanned and the
//! value closest to 1.1x (violating) or 0.9x (passing) the threshold is
//! used. Lower-bound rules violate below, so their sides swap.

use corpusmix_core::corpus::{Document, TokenizerScheme};
use corpusmix_core::curation::{
    code_filter, heuristic_filter, perplexity_filter, CodeMetrics, CodeThresholds, CommentSyntax, HeuristicThresholds, NgramLm, Rule,
    TextMetrics, CHARS_PER_TOKEN, COMMENT_FRACTION, LINES_OF_CODE,
};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::common::{ensure, word};

/// Largest allowed relative gap between the placed value and 1.1x / 0.9x.
const POSITION_TOLERANCE: f64 = 0.02;
const PERPLEXITY_RULE: &str = "N-gram LM Perplexity";

#[derive(Clone)]
struct Doc {
    text: String,
    url: Option<String>,
}

impl Doc {
    fn text(text: String) -> Self {
        Doc { text, url: None }
    }

    fn document(&self) -> Document {
        let mut d = Document::new("fixture", "web", self.text.clone());
        d.url = self.url.clone();
        d
    }
}

/// Distinct six-letter words, none of them common English words.
fn words(start: usize, n: usize) -> Vec<String> {
    (start..start + n).map(|i| word(i * 31 + 7, 6)).collect()
}

/// The base stream: two common words, then distinct filler.
fn stream(n: usize) -> Vec<String> {
    let mut w = vec!["the".to_string(), "and".to_string()];
    w.extend(words(0, n - 2));
    w
}

fn lines(ws: &[String], per_line: usize, end: &str) -> Vec<String> {
    ws.chunks(per_line).map(|c| format!("{}{end}", c.join(" "))).collect()
}

fn joined(ls: &[String]) -> String {
    ls.join("\n")
}

/// Spreads `k` marks over `n` slots as evenly as possible.
fn spread(k: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| (i + 1) * k / n > i * k / n).collect()
}

struct Placement {
    value: f64,
    doc: Doc,
}

/// Scans `ks` and keeps the parameter whose measured value is closest to `target`.
fn place(measure: &dyn Fn(&Doc) -> f64, build: &dyn Fn(usize) -> Doc, ks: std::ops::Range<usize>, target: f64) -> Placement {
    ks.map(|k| {
        let doc = build(k);
        Placement { value: measure(&doc), doc }
    })
    .min_by(|a, b| (a.value - target).abs().total_cmp(&(b.value - target).abs()))
    .expect("non-empty scan")
}

struct Fixture {
    rule: String,
    threshold: f64,
    /// The rule rejects values below the threshold.
    lower_bound: bool,
    /// Integer or boolean rules cannot sit at exactly +-10%.
    discrete: bool,
    violating: Placement,
    passing: Placement,
}

fn heuristic_fixtures() -> Vec<Fixture> {
    let t = HeuristicThresholds::default();
    let mut out = Vec::new();
    let mut add = |rule: Rule, threshold: f64, lower: bool, build: &dyn Fn(usize) -> Doc, ks: std::ops::Range<usize>| {
        let measure = |d: &Doc| TextMetrics::measure(&d.text, d.url.as_deref()).value(rule);
        let (bad, good) = if lower { (0.9, 1.1) } else { (1.1, 0.9) };
        out.push(Fixture {
            rule: rule.name().to_string(),
            threshold,
            lower_bound: lower,
            discrete: false,
            violating: place(&measure, build, ks.clone(), bad * threshold),
            passing: place(&measure, build, ks, good * threshold),
        });
    };

    add(Rule::NonAlphanumericFraction, t.non_alphanumeric_fraction, false, &|k| {
        let ws = stream(200);
        let per = spread(k % 200, 200);
        let ws: Vec<String> = ws
            .iter()
            .zip(per)
            .map(|(w, extra)| format!("{w}{}", "%".repeat(k / 200 + usize::from(extra))))
            .collect();
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 0..1000);

    add(Rule::WordsWithoutAlphabetsFraction, t.words_without_alphabets_fraction, false, &|k| {
        let ws: Vec<String> = stream(200)
            .into_iter()
            .zip(spread(k, 200))
            .enumerate()
            .map(|(i, (w, digit))| if digit && i > 1 { "12".to_string() } else { w })
            .collect();
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 0..120);

    add(Rule::NumbersFraction, t.numbers_fraction, false, &|k| {
        let mut ws = stream(200);
        for (w, extra) in ws[2..].iter_mut().zip(spread(k % 198, 198)) {
            w.push_str(&"7".repeat(k / 198 + usize::from(extra)));
        }
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 0..600);

    add(Rule::UrlFraction, t.url_fraction, false, &|k| {
        let ws: Vec<String> = stream(300)
            .into_iter()
            .zip(spread(k, 300))
            .enumerate()
            .map(|(i, (w, url))| if url && i > 1 { format!("http://a.io/{}", word(i, 3)) } else { w })
            .collect();
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 0..150);

    add(Rule::BulletLinesFraction, t.bullet_lines_fraction, false, &|k| {
        let ls: Vec<String> = lines(&stream(400), 4, ".")
            .into_iter()
            .zip(spread(k, 100))
            .map(|(l, b)| if b { format!("- {l}") } else { l })
            .collect();
        Doc::text(joined(&ls))
    }, 0..101);

    add(Rule::WhitespaceFraction, t.whitespace_fraction, false, &|k| {
        let ws = stream(200);
        let pads = spread(k % 199, 199);
        let mut text = ws[0].clone();
        for (i, w) in ws.iter().enumerate().skip(1) {
            let gap = 1 + k / 199 + usize::from(pads[i - 1]);
            text.push_str(&" ".repeat(gap));
            text.push_str(w);
            if i % 10 == 9 {
                text.push('.');
            }
        }
        Doc::text(text)
    }, 0..600);

    add(Rule::ParenthesesFraction, t.parentheses_fraction, false, &|k| {
        let ws: Vec<String> = stream(200)
            .into_iter()
            .zip(spread(k, 200))
            .map(|(w, p)| if p { format!("({w})") } else { w })
            .collect();
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 0..200);

    add(Rule::SymbolToWordRatio, t.symbol_to_word_ratio, false, &|k| {
        let ws: Vec<String> = stream(200)
            .into_iter()
            .zip(spread(k, 200))
            .map(|(w, h)| if h { format!("#{w}") } else { w })
            .collect();
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 0..100);

    add(Rule::LongWord, t.max_word_length, false, &|k| {
        let mut ws = stream(400);
        ws.push("q".repeat(k));
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 800..1200);

    add(Rule::WordCount, t.word_count.min, true, &|k| Doc::text(joined(&lines(&stream(k), 5, "."))), 30..80);

    add(Rule::MeanWordLength, t.mean_word_length.max, false, &|k| {
        let mut ws = vec!["the".to_string(), "and".to_string()];
        ws.extend((0..198).map(|i| word(i * 31 + 7, k)));
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 6..14);

    add(Rule::BoilerplateFraction, t.boilerplate_fraction, false, &|k| {
        let ls: Vec<String> = lines(&stream(1000), 5, ".")
            .into_iter()
            .zip(spread(k, 200))
            .map(|(l, b)| if b { format!("Copyright {l}") } else { l })
            .collect();
        Doc::text(joined(&ls))
    }, 0..200);

    add(Rule::DuplicateLineFraction, t.duplicate_line_fraction, false, &|k| {
        let mut ls = Vec::new();
        for (l, yes) in lines(&stream(1000), 10, ".").into_iter().zip(spread(k, 100)) {
            ls.push(l);
            if yes {
                ls.push("Yes.".to_string());
            }
        }
        Doc::text(joined(&ls))
    }, 0..100);

    add(Rule::DuplicateParagraphFraction, t.duplicate_paragraph_fraction, false, &|k| {
        let mut ps = Vec::new();
        let ls = lines(&stream(1500), 5, ".");
        for (p, yes) in ls.chunks(3).zip(spread(k, 100)) {
            ps.push(p.join("\n"));
            if yes {
                ps.push("Yes.".to_string());
            }
        }
        Doc::text(ps.join("\n\n"))
    }, 0..100);

    // distinct four-word lines, each appearing twice, one copy per half
    let repeated = |k: usize, sep: &str| {
        let unique = lines(&stream(900), 3, ".");
        let shared: Vec<String> = (0..k).map(|j| format!("{}.", words(10_000 + 4 * j, 4).join(" "))).collect();
        let mut ls = Vec::new();
        for half in unique.chunks(150) {
            for (i, u) in half.iter().enumerate() {
                ls.push(u.clone());
                if let Some(s) = shared.get(i) {
                    ls.push(s.clone());
                }
            }
        }
        Doc::text(ls.join(sep))
    };
    add(Rule::DuplicateLineCharFraction, t.duplicate_line_char_fraction, false, &|k| repeated(k, "\n"), 0..150);
    add(Rule::DuplicateParagraphCharFraction, t.duplicate_paragraph_char_fraction, false, &|k| repeated(k, "\n\n"), 0..150);

    add(Rule::TopNgramFraction, t.top_ngram_fraction, false, &|k| {
        let mut ws = Vec::new();
        for (w, pair) in stream(400).into_iter().zip(spread(k, 400)) {
            ws.push(w);
            if pair {
                ws.push("zephyr".to_string());
                ws.push("quartz".to_string());
            }
        }
        Doc::text(joined(&lines(&ws, 10, ".")))
    }, 0..200);

    add(Rule::DuplicateNgramFraction, t.duplicate_ngram_fraction, false, &|k| {
        let base = stream(2400);
        let (first, second) = base.split_at(1200);
        let chunks: Vec<Vec<String>> = (0..k).map(|j| words(20_000 + 5 * j, 5)).collect();
        let mut out = Vec::new();
        let mut next = [0usize; 2];
        for (h, half) in [first, second].into_iter().enumerate() {
            for (w, c) in half.iter().zip(spread(k, half.len())) {
                out.push(w.clone());
                if c {
                    out.extend(chunks[next[h]].iter().cloned());
                    next[h] += 1;
                }
            }
        }
        Doc::text(out.join(" ") + ".")
    }, 0..240);

    add(Rule::NoPunctuationLineFraction, t.no_punctuation_line_fraction, false, &|k| {
        let ls: Vec<String> = lines(&stream(2000), 10, "")
            .into_iter()
            .zip(spread(k, 200))
            .map(|(l, bare)| if bare { l } else { format!("{l}.") })
            .collect();
        Doc::text(joined(&ls))
    }, 0..200);

    add(Rule::EllipsisLineFraction, t.ellipsis_line_fraction, false, &|k| {
        let ls: Vec<String> = lines(&stream(2000), 10, "")
            .into_iter()
            .zip(spread(k, 200))
            .map(|(l, e)| if e { format!("{l}...") } else { format!("{l}.") })
            .collect();
        Doc::text(joined(&ls))
    }, 0..200);

    // integer threshold 2: the closest integers on each side are 1 and 3
    let common = |k: usize| {
        let mut ws: Vec<String> = ["the", "and", "with"][..k].iter().map(|s| s.to_string()).collect();
        ws.extend(words(0, 200));
        Doc::text(joined(&lines(&ws, 10, ".")))
    };
    let count = |d: &Doc| TextMetrics::measure(&d.text, None).value(Rule::CommonEnglishWords);
    out.push(Fixture {
        rule: Rule::CommonEnglishWords.name().to_string(),
        threshold: t.min_common_english_words,
        lower_bound: true,
        discrete: true,
        violating: Placement { value: count(&common(1)), doc: common(1) },
        passing: Placement { value: count(&common(3)), doc: common(3) },
    });

    let with_url = |url: &str| Doc { text: joined(&lines(&stream(200), 10, ".")), url: Some(url.to_string()) };
    let porn = |d: &Doc| TextMetrics::measure(&d.text, d.url.as_deref()).value(Rule::PornographicUrl);
    let (bad, good) = (with_url("https://example.com/xxx/videos"), with_url("https://example.com/garden/tips"));
    out.push(Fixture {
        rule: Rule::PornographicUrl.name().to_string(),
        threshold: 1.0,
        lower_bound: false,
        discrete: true,
        violating: Placement { value: porn(&bad), doc: bad },
        passing: Placement { value: porn(&good), doc: good },
    });
    out
}

fn check_positions(f: &Fixture) -> Result<(), String> {
    if f.discrete {
        return Ok(());
    }
    let (bad, good) = if f.lower_bound { (0.9, 1.1) } else { (1.1, 0.9) };
    for (p, factor) in [(&f.violating, bad), (&f.passing, good)] {
        let rel = p.value / (factor * f.threshold) - 1.0;
        ensure!(rel.abs() <= POSITION_TOLERANCE, "{}: placed {} for target {}x{}", f.rule, p.value, factor, f.threshold);
    }
    Ok(())
}

fn perplexity_fixture(threshold: f64) -> (Fixture, NgramLm) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let vocab: Vec<String> = words(50_000, 30);
    let train: Vec<Document> = (0..200)
        .map(|i| {
            let ws: Vec<&String> = (0..100).map(|_| vocab.choose(&mut rng).unwrap()).collect();
            Document::new(format!("t{i}"), "ref", ws.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "))
        })
        .collect();
    let lm = NgramLm::train(&train, 3).expect("trains");
    let known: Vec<String> = (0..400).map(|_| vocab.choose(&mut rng).unwrap().clone()).collect();
    let build = |k: usize| {
        let ws: Vec<String> =
            known.iter().enumerate().map(|(i, w)| if i < k { format!("oov{}", word(i, 5)) } else { w.clone() }).collect();
        Doc::text(ws.join(" "))
    };
    let measure = |d: &Doc| lm.perplexity(&d.text);
    let violating = place(&measure, &build, 0..401, 1.1 * threshold);
    let passing = place(&measure, &build, 0..401, 0.9 * threshold);
    let fixture = Fixture {
        rule: PERPLEXITY_RULE.to_string(),
        threshold,
        lower_bound: false,
        discrete: false,
        violating,
        passing,
    };
    (fixture, lm)
}

fn code_fixtures() -> Vec<Fixture> {
    let t = CodeThresholds::default();
    let metric = |rule: &str, d: &Doc, lang: &str| {
        let m = CodeMetrics::measure(
            &d.text,
            CommentSyntax::for_language(Some(lang)),
            TokenizerScheme::WhitespaceWords,
        );
        match rule {
            COMMENT_FRACTION => m.comment_fraction,
            LINES_OF_CODE => m.lines as f64,
            _ => m.chars_per_token,
        }
    };
    let mut out = Vec::new();

    let comments = |k: usize| {
        let ls: Vec<String> = (0..200)
            .map(|i| if i < k { format!("// {}", "c".repeat(57)) } else { "int value = 1;".to_string() })
            .collect();
        Doc::text(ls.join("\n"))
    };
    let m = |d: &Doc| metric(COMMENT_FRACTION, d, "c");
    out.push(Fixture {
        rule: COMMENT_FRACTION.into(),
        threshold: t.comment_fraction.max,
        lower_bound: false,
        discrete: false,
        violating: place(&m, &comments, 0..201, 1.1 * t.comment_fraction.max),
        passing: place(&m, &comments, 0..201, 0.9 * t.comment_fraction.max),
    });

    let loc = |n: usize| {
        Doc::text(vec!["int a = 1; // c"; n].join("\n"))
    };
    let max = t.lines_of_code.max;
    let m = |d: &Doc| metric(LINES_OF_CODE, d, "c");
    out.push(Fixture {
        rule: LINES_OF_CODE.into(),
        threshold: max,
        lower_bound: false,
        discrete: false,
        violating: Placement { value: m(&loc((1.1 * max) as usize)), doc: loc((1.1 * max) as usize) },
        passing: Placement { value: m(&loc((0.9 * max) as usize)), doc: loc((0.9 * max) as usize) },
    });

    // five one-token lines: 9 chars / 5 tokens and 11 chars / 5 tokens
    let bad = Doc::text("#\nb\nc\nd\ne".into());
    let good = Doc::text("#\nbb\ncc\nd\ne".into());
    let m = |d: &Doc| metric(CHARS_PER_TOKEN, d, "python");
    out.push(Fixture {
        rule: CHARS_PER_TOKEN.into(),
        threshold: t.chars_per_token.min,
        lower_bound: true,
        discrete: false,
        violating: Placement { value: m(&bad), doc: bad },
        passing: Placement { value: m(&good), doc: good },
    });
    out
}

pub fn run() -> Result<String, String> {
    let thresholds = HeuristicThresholds::default();
    let mut text = heuristic_fixtures();
    let (ppl, lm) = perplexity_fixture(thresholds.perplexity);
    text.push(ppl);
    let mut verdicts = 0;
    for f in &text {
        check_positions(f)?;
        for (p, should_fail) in [(&f.violating, true), (&f.passing, false)] {
            let failed: Vec<String> = if f.rule == PERPLEXITY_RULE {
                let (_, records) = perplexity_filter(vec![p.doc.document()], &lm, f.threshold).map_err(|e| e.to_string())?;
                records.iter().filter(|r| !r.kept).map(|_| f.rule.clone()).collect()
            } else {
                heuristic_filter(&p.doc.document(), &thresholds, true).failed_rules.into_iter().map(|v| v.rule).collect()
            };
            let expected: Vec<String> = if should_fail { vec![f.rule.clone()] } else { vec![] };
            ensure!(failed == expected, "{} at {}: failed {:?}, expected {:?}", f.rule, p.value, failed, expected);
            verdicts += 1;
        }
    }
    ensure!(verdicts == 2 * (Rule::ALL.len() + 1), "{verdicts} text verdicts");

    let code_t = CodeThresholds::default();
    let code = code_fixtures();
    let mut code_verdicts = 0;
    for f in &code {
        check_positions(f)?;
        let lang = if f.rule == CHARS_PER_TOKEN { "python" } else { "c" };
        for (p, should_fail) in [(&f.violating, true), (&f.passing, false)] {
            let mut d = Document::new("code", "code", p.doc.text.clone());
            d.language = Some(lang.into());
            let failed: Vec<String> = code_filter(&d, &code_t).failed_rules.into_iter().map(|v| v.rule).collect();
            let expected: Vec<String> = if should_fail { vec![f.rule.clone()] } else { vec![] };
            ensure!(failed == expected, "{} at {}: failed {:?}, expected {:?}", f.rule, p.value, failed, expected);
            code_verdicts += 1;
        }
    }
    ensure!(code_verdicts == 6, "{code_verdicts} code verdicts");
    Ok(format!(
        "{verdicts} text verdicts over {} rules and {code_verdicts} code verdicts as expected; placements within {POSITION_TOLERANCE} of +-10% (integer and boolean rules at nearest values)",
        Rule::ALL.len() + 1
    ))
}
