//! Seeded pseudo-text: an order-2 word chain over a bundled scholarly corpus,
//! plus a synthetic name pool for author blocks.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{Purpose, RngSeed};
use crate::style::{Caps, FontRole, StyleProfile};

const DEFAULT_CORPUS: &str = include_str!("../data/seed_corpus.txt");
const DEFAULT_NAMES: &str = include_str!("../data/names.txt");

const START: &str = "\u{2}";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextRole {
    Title,
    Author,
    Abstract,
    #[serde(rename = "heading-1")]
    Heading1,
    #[serde(rename = "heading-2")]
    Heading2,
    #[serde(rename = "heading-3")]
    Heading3,
    Caption,
    Body,
    Keywords,
}

impl TextRole {
    pub fn font_role(self) -> FontRole {
        match self {
            TextRole::Title => FontRole::Title,
            TextRole::Author => FontRole::Author,
            TextRole::Abstract => FontRole::AbstractText,
            TextRole::Heading1 => FontRole::Heading1,
            TextRole::Heading2 => FontRole::Heading2,
            TextRole::Heading3 => FontRole::Heading3,
            TextRole::Caption => FontRole::Caption,
            TextRole::Body => FontRole::Body,
            TextRole::Keywords => FontRole::Keywords,
        }
    }

    fn is_title_case(self) -> bool {
        matches!(
            self,
            TextRole::Title | TextRole::Heading1 | TextRole::Heading2 | TextRole::Heading3
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextBlock {
    pub role: TextRole,
    pub tokens: Vec<String>,
    /// Token indices before which a hard line break is forced.
    pub breaks: Vec<usize>,
    pub target_line_count: u32,
}

impl TextBlock {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }

    /// Tokens grouped by forced line breaks.
    pub fn lines(&self) -> Vec<&[String]> {
        let mut out = Vec::new();
        let mut start = 0;
        for &b in self.breaks.iter().chain(std::iter::once(&self.tokens.len())) {
            if b > start && b <= self.tokens.len() {
                out.push(&self.tokens[start..b]);
                start = b;
            }
        }
        out
    }
}

/// Inclusive token-count bounds for a requested length: ±20%, rounded outward.
pub fn token_bounds(approx_tokens: usize) -> (usize, usize) {
    let lo = (0.8 * approx_tokens as f64).floor() as usize;
    let hi = (1.2 * approx_tokens as f64).ceil() as usize;
    (lo.max(1), hi.max(1))
}

/// Strips punctuation and case so generated tokens compare against the lexicon.
pub fn normalize_token(tok: &str) -> String {
    tok.trim_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase()
}

/// Word-chain text and name source. Cheap to clone.
#[derive(Debug, Clone)]
pub struct TextSource {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    chain: HashMap<(String, String), Vec<String>>,
    /// Sentence-initial words, with multiplicity.
    starts: Vec<String>,
    lexicon: BTreeSet<String>,
    words: Vec<String>,
    first_names: Vec<String>,
    last_names: Vec<String>,
    affiliations: Vec<String>,
}

impl TextSource {
    /// The bundled corpus and name pool.
    pub fn bundled() -> TextSource {
        static SOURCE: OnceLock<TextSource> = OnceLock::new();
        SOURCE
            .get_or_init(|| {
                TextSource::from_strs(DEFAULT_CORPUS, DEFAULT_NAMES).expect("bundled text data is valid")
            })
            .clone()
    }

    pub fn from_files(corpus: Option<&Path>, names: Option<&Path>) -> Result<TextSource> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::io(p, e));
        let corpus_text = match corpus {
            Some(p) => read(p)?,
            None => DEFAULT_CORPUS.to_string(),
        };
        let names_text = match names {
            Some(p) => read(p)?,
            None => DEFAULT_NAMES.to_string(),
        };
        TextSource::from_strs(&corpus_text, &names_text)
    }

    /// Builds the chain from sentences (one or more per line) and a name pool
    /// with `@first`, `@last` and `@affiliation` sections.
    pub fn from_strs(corpus: &str, names: &str) -> Result<TextSource> {
        let mut chain: HashMap<(String, String), Vec<String>> = HashMap::new();
        let mut starts = Vec::new();
        let mut lexicon = BTreeSet::new();
        for sentence in split_sentences(corpus) {
            let words: Vec<&str> = sentence.split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            starts.push(words[0].to_string());
            let mut a = START.to_string();
            let mut b = START.to_string();
            for w in &words {
                chain.entry((a.clone(), b.clone())).or_default().push(w.to_string());
                lexicon.insert(normalize_token(w));
                a = b;
                b = w.to_string();
            }
        }
        lexicon.remove("");
        if starts.is_empty() {
            return Err(Error::InvalidArgument("text corpus contains no sentences".into()));
        }
        let words: Vec<String> = lexicon.iter().cloned().collect();

        let mut section = "";
        let (mut first_names, mut last_names, mut affiliations) = (Vec::new(), Vec::new(), Vec::new());
        for line in names.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(s) = line.strip_prefix('@') {
                section = match s.trim() {
                    "first" => "first",
                    "last" => "last",
                    "affiliation" => "affiliation",
                    other => {
                        return Err(Error::InvalidArgument(format!("unknown name-pool section @{other}")))
                    }
                };
                continue;
            }
            match section {
                "first" => first_names.extend(line.split_whitespace().map(String::from)),
                "last" => last_names.extend(line.split_whitespace().map(String::from)),
                "affiliation" => affiliations.push(line.to_string()),
                _ => return Err(Error::InvalidArgument("name-pool entry before any @section".into())),
            }
        }
        if first_names.is_empty() || last_names.is_empty() || affiliations.is_empty() {
            return Err(Error::InvalidArgument(
                "name pool needs @first, @last and @affiliation entries".into(),
            ));
        }
        Ok(TextSource {
            inner: Arc::new(Inner {
                chain,
                starts,
                lexicon,
                words,
                first_names,
                last_names,
                affiliations,
            }),
        })
    }

    pub fn lexicon(&self) -> &BTreeSet<String> {
        &self.inner.lexicon
    }

    pub fn pseudo_text(&self, role: TextRole, approx_tokens: usize, seed: RngSeed) -> Result<TextBlock> {
        if approx_tokens == 0 {
            return Err(Error::InvalidArgument("approx_tokens must be at least 1".into()));
        }
        let mut rng = seed.rng(Purpose::Text);
        let lo = ((0.9 * approx_tokens as f64).ceil() as usize).max(1);
        let hi = ((1.1 * approx_tokens as f64).floor() as usize).max(lo);
        let n = rng.gen_range(lo..=hi);

        let tokens = match role {
            TextRole::Keywords => self.keywords(&mut rng, n),
            TextRole::Author => {
                return Err(Error::InvalidArgument("use pseudo_authors for author blocks".into()))
            }
            _ => {
                let raw = self.chain_tokens(&mut rng, n);
                if role.is_title_case() {
                    title_case(raw)
                } else {
                    finish_sentences(raw)
                }
            }
        };
        Ok(TextBlock {
            role,
            target_line_count: estimate_lines(tokens.len()),
            tokens,
            breaks: Vec::new(),
        })
    }

    pub fn pseudo_authors(&self, count: usize, style: &StyleProfile, seed: RngSeed) -> Result<TextBlock> {
        let upper = style
            .fonts_for(FontRole::Author)
            .iter()
            .all(|f| f.caps == Caps::AllCaps);
        self.author_lines(count, upper, seed)
    }

    /// Author block with the case decided by the caller.
    pub fn author_lines(&self, count: usize, upper: bool, seed: RngSeed) -> Result<TextBlock> {
        if !(1..=12).contains(&count) {
            return Err(Error::InvalidArgument(format!(
                "author count {count} outside 1..=12"
            )));
        }
        let mut rng = seed.rng(Purpose::Text);
        let inner = &self.inner;
        let mut tokens = Vec::new();
        let mut breaks = Vec::new();
        for i in 0..count {
            if i > 0 {
                breaks.push(tokens.len());
            }
            let first = inner.first_names.choose(&mut rng).expect("non-empty pool");
            let last = inner.last_names.choose(&mut rng).expect("non-empty pool");
            let initial = (b'A' + rng.gen_range(0..26u8)) as char;
            let affiliation = inner.affiliations.choose(&mut rng).expect("non-empty pool");
            let line = format!("{first} {initial}. {last}, {affiliation}");
            let line = if upper { line.to_uppercase() } else { line };
            tokens.extend(line.split_whitespace().map(String::from));
        }
        Ok(TextBlock {
            role: TextRole::Author,
            target_line_count: count as u32,
            tokens,
            breaks,
        })
    }

    fn chain_tokens<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<String> {
        let inner = &self.inner;
        let mut out = Vec::with_capacity(n);
        let mut a = START.to_string();
        let mut b = START.to_string();
        while out.len() < n {
            let next = match inner.chain.get(&(a.clone(), b.clone())) {
                Some(cands) => cands.choose(rng).expect("chain entries are non-empty").clone(),
                None => inner.starts.choose(rng).expect("corpus has sentences").clone(),
            };
            if next.ends_with('.') {
                a = START.to_string();
                b = START.to_string();
            } else {
                a = b;
                b = next.clone();
            }
            out.push(next);
        }
        out
    }

    fn keywords<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<String> {
        let words: Vec<&String> = self.inner.words.iter().filter(|w| w.len() > 4).collect();
        let pool = if words.is_empty() { self.inner.words.iter().collect() } else { words };
        let mut out: Vec<String> = (0..n)
            .map(|_| format!("{},", pool.choose(rng).expect("lexicon is non-empty")))
            .collect();
        if let Some(last) = out.last_mut() {
            last.pop();
        }
        out
    }
}

fn split_sentences(corpus: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for word in corpus.split_whitespace() {
        if !cur.is_empty() {
            cur.push(' ');
        }
        cur.push_str(word);
        if word.ends_with('.') {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.trim().is_empty() {
        cur.push('.');
        out.push(cur);
    }
    out
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

const SMALL_WORDS: [&str; 12] = ["a", "an", "and", "as", "at", "by", "for", "in", "of", "on", "the", "to"];

fn title_case(tokens: Vec<String>) -> Vec<String> {
    tokens
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let bare = t.trim_end_matches(|c: char| c == '.' || c == ',');
            let lower = bare.to_lowercase();
            if i > 0 && SMALL_WORDS.contains(&lower.as_str()) {
                lower
            } else {
                capitalize(bare)
            }
        })
        .collect()
}

/// Sentence case with a terminating period on the final token.
fn finish_sentences(mut tokens: Vec<String>) -> Vec<String> {
    let mut sentence_start = true;
    for t in tokens.iter_mut() {
        if sentence_start {
            *t = capitalize(t);
        }
        sentence_start = t.ends_with('.');
    }
    if let Some(last) = tokens.last_mut() {
        let trimmed = last.trim_end_matches(|c: char| c == ',' || c == '.').to_string();
        *last = format!("{trimmed}.");
    }
    tokens
}

fn estimate_lines(tokens: usize) -> u32 {
    tokens.div_ceil(10).max(1) as u32
}

/// [`TextSource::pseudo_text`] on the bundled source.
pub fn pseudo_text(role: TextRole, approx_tokens: usize, seed: RngSeed) -> Result<TextBlock> {
    TextSource::bundled().pseudo_text(role, approx_tokens, seed)
}

/// [`TextSource::pseudo_authors`] on the bundled source.
pub fn pseudo_authors(count: usize, style: &StyleProfile, seed: RngSeed) -> Result<TextBlock> {
    TextSource::bundled().pseudo_authors(count, style, seed)
}
