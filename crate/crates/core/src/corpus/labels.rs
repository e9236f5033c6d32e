//! Attribute label vocabularies and binning.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Toxicity below this is treated as unlikely to contain toxic content.
pub const UNLIKELY_TOXIC: f64 = 0.3;
/// Toxicity at or above this counts as high for heatmaps and filtering.
pub const HIGH_TOXICITY: f64 = 0.5;

/// Name of the catch-all bucket for out-of-vocabulary or missing labels.
pub const UNKNOWN: &str = "Unknown";

/// How label problems are handled.
///
/// `Strict` turns any out-of-vocabulary value, missing label, or unmatched id
/// into an error. `Lenient` maps unknown vocabulary to [`UNKNOWN`] at read time,
/// skips-and-counts when ingesting label files or building target sets, and
/// places unlabeled documents in the `Unknown` bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelPolicy {
    Strict,
    #[default]
    #[serde(alias = "skip")]
    Lenient,
}

fn normalize_key(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

macro_rules! vocabulary {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal $(| $alias:literal)*),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant,)+
            Unknown,
        }

        impl $name {
            /// Every in-vocabulary value, in canonical order (excludes `Unknown`).
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $label,)+
                    $name::Unknown => UNKNOWN,
                }
            }

            /// Parses a label. Out-of-vocabulary values become `Unknown` under
            /// [`LabelPolicy::Lenient`] and an error under `Strict`.
            pub fn parse(s: &str, policy: LabelPolicy) -> Result<Self> {
                match s.parse() {
                    Ok(v) => Ok(v),
                    Err(e) => match policy {
                        LabelPolicy::Strict => Err(e),
                        LabelPolicy::Lenient => Ok($name::Unknown),
                    },
                }
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                let key = normalize_key(s);
                $(
                    if key == normalize_key($label) $(|| key == normalize_key($alias))* {
                        return Ok($name::$variant);
                    }
                )+
                if key == normalize_key(UNKNOWN) {
                    return Ok($name::Unknown);
                }
                Err(Error::InvalidLabel(format!(
                    "`{}` is not a valid {} label",
                    s,
                    stringify!($name)
                )))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.name())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

vocabulary!(
    /// Quality class from the document quality classifier.
    Quality {
        High => "High",
        Medium => "Medium",
        Low => "Low",
    }
);

vocabulary!(
    /// Content domain; 27 classes.
    Domain {
        Adult => "Adult",
        ArtsAndEntertainment => "Arts and Entertainment",
        AutosAndVehicles => "Autos and Vehicles",
        BeautyAndFitness => "Beauty and Fitness",
        BooksAndLiterature => "Books and Literature",
        BusinessAndIndustrial => "Business and Industrial",
        ComputersAndElectronics => "Computers and Electronics",
        Finance => "Finance",
        FoodAndDrink => "Food and Drink",
        Games => "Games",
        Health => "Health",
        HobbiesAndLeisure => "Hobbies and Leisure",
        HomeAndGarden => "Home and Garden",
        InternetAndTelecom => "Internet and Telecom",
        JobsAndEducation => "Jobs and Education",
        LawAndGovernment => "Law and Government",
        News => "News",
        OnlineCommunities => "Online Communities",
        PeopleAndSociety => "People and Society",
        PetsAndAnimals => "Pets and Animals",
        RealEstate => "Real Estate",
        Reference => "Reference",
        Science => "Science",
        SensitiveSubjects => "Sensitive Subjects",
        Shopping => "Shopping",
        Sports => "Sports",
        TravelAndTransportation => "Travel and Transportation",
    }
);

vocabulary!(
    /// Type of speech (document genre); 11 classes.
    TypeOfSpeech {
        Conversational => "Conversational",
        News => "News",
        OnlineComments => "Online Comments",
        BooksAndLiterature => "Books and Literature",
        Blogs => "Blogs",
        AnalyticalExposition => "Analytical Exposition" | "Persuasive Text",
        ExplanatoryArticle => "Explanatory Article" | "Explanatory Articles",
        Reviews => "Reviews",
        Websites => "Product/Company/Organization/Personal Websites" | "Websites",
        BoilerplateContent => "Boilerplate Content" | "Boilerplate",
        Miscellaneous => "Miscellaneous" | "Misc",
    }
);

/// Classifier outputs attached to a document. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttributeLabels {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toxicity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<Quality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_of_speech: Option<TypeOfSpeech>,
}

impl AttributeLabels {
    pub fn is_empty(&self) -> bool {
        self.toxicity.is_none()
            && self.quality.is_none()
            && self.domain.is_none()
            && self.type_of_speech.is_none()
    }
}

/// Label fields as they appear on the wire, before vocabulary checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawLabels {
    #[serde(default)]
    pub toxicity: Option<f64>,
    #[serde(default)]
    pub quality: Option<String>,
    #[serde(default)]
    pub domain: Option<String>,
    #[serde(default)]
    pub type_of_speech: Option<String>,
}

impl RawLabels {
    /// Validates toxicity range (always) and vocabulary (per `policy`).
    pub fn resolve(&self, policy: LabelPolicy) -> Result<AttributeLabels> {
        if let Some(t) = self.toxicity {
            check_toxicity(t)?;
        }
        Ok(AttributeLabels {
            toxicity: self.toxicity,
            quality: self
                .quality
                .as_deref()
                .map(|s| Quality::parse(s, policy))
                .transpose()?,
            domain: self
                .domain
                .as_deref()
                .map(|s| Domain::parse(s, policy))
                .transpose()?,
            type_of_speech: self
                .type_of_speech
                .as_deref()
                .map(|s| TypeOfSpeech::parse(s, policy))
                .transpose()?,
        })
    }
}

pub fn check_toxicity(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidLabel(format!(
            "toxicity {t} is outside [0, 1]"
        )))
    }
}

/// Interval edges for binning toxicity probabilities.
///
/// Bins are half-open `[e_i, e_{i+1})` except the last, which is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ToxicityBins {
    edges: Vec<f64>,
}

impl Default for ToxicityBins {
    fn default() -> Self {
        ToxicityBins {
            edges: vec![0.0, UNLIKELY_TOXIC, HIGH_TOXICITY, 0.7, 1.0],
        }
    }
}

impl TryFrom<Vec<f64>> for ToxicityBins {
    type Error = Error;

    fn try_from(edges: Vec<f64>) -> Result<Self> {
        ToxicityBins::new(edges)
    }
}

impl From<ToxicityBins> for Vec<f64> {
    fn from(b: ToxicityBins) -> Self {
        b.edges
    }
}

impl ToxicityBins {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidParameter(
                "toxicity bins need at least two edges".into(),
            ));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "toxicity bin edges must be strictly increasing".into(),
            ));
        }
        Ok(ToxicityBins { edges })
    }

    /// Two bins split at `threshold`: low and high toxicity.
    pub fn cutoff(threshold: f64) -> Result<Self> {
        ToxicityBins::new(vec![0.0, threshold, 1.0])
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bin_of(&self, value: f64) -> Option<usize> {
        bin_index(&self.edges, value)
    }

    pub fn labels(&self) -> Vec<String> {
        bin_labels(&self.edges)
    }
}

/// Index of the bin holding `value`; the last bin is closed on the right.
pub fn bin_index(edges: &[f64], value: f64) -> Option<usize> {
    let n = edges.len().checked_sub(1)?;
    if n == 0 || value.is_nan() || value < edges[0] || value > edges[n] {
        return None;
    }
    // first edge strictly greater than value
    let upper = edges.partition_point(|&e| e <= value);
    Some(upper.saturating_sub(1).min(n - 1))
}

pub fn bin_labels(edges: &[f64]) -> Vec<String> {
    let n = edges.len().saturating_sub(1);
    (0..n)
        .map(|i| {
            let close = if i + 1 == n { "]" } else { ")" };
            format!("[{},{}{}", fmt_edge(edges[i]), fmt_edge(edges[i + 1]), close)
        })
        .collect()
}

fn fmt_edge(e: f64) -> String {
    if e.is_infinite() {
        if e > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{e}")
    }
}

/// A labeled axis that documents can be grouped by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    Toxicity,
    Quality,
    Domain,
    TypeOfSpeech,
}

impl Attribute {
    pub const ALL: [Attribute; 4] = [
        Attribute::Toxicity,
        Attribute::Quality,
        Attribute::Domain,
        Attribute::TypeOfSpeech,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Toxicity => "toxicity",
            Attribute::Quality => "quality",
            Attribute::Domain => "domain",
            Attribute::TypeOfSpeech => "type_of_speech",
        }
    }

    /// The document's label on this axis, if present. Toxicity is binned.
    pub fn label_of(self, labels: Option<&AttributeLabels>, bins: &ToxicityBins) -> Option<String> {
        let labels = labels?;
        match self {
            Attribute::Toxicity => {
                let t = labels.toxicity?;
                bins.bin_of(t).map(|i| bins.labels()[i].clone())
            }
            Attribute::Quality => labels.quality.map(|q| q.name().to_string()),
            Attribute::Domain => labels.domain.map(|d| d.name().to_string()),
            Attribute::TypeOfSpeech => labels.type_of_speech.map(|t| t.name().to_string()),
        }
    }

    /// Canonical label order for this axis, with `Unknown` last.
    pub fn vocabulary(self, bins: &ToxicityBins) -> Vec<String> {
        fn names<T: Copy>(all: &[T], name: impl Fn(T) -> &'static str) -> Vec<String> {
            all.iter()
                .map(|&v| name(v).to_string())
                .chain(std::iter::once(UNKNOWN.to_string()))
                .collect()
        }
        match self {
            Attribute::Toxicity => bins.labels(),
            Attribute::Quality => names(Quality::ALL, Quality::name),
            Attribute::Domain => names(Domain::ALL, Domain::name),
            Attribute::TypeOfSpeech => names(TypeOfSpeech::ALL, TypeOfSpeech::name),
        }
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match normalize_key(s).as_str() {
            "toxicity" | "tox" => Ok(Attribute::Toxicity),
            "quality" | "qual" => Ok(Attribute::Quality),
            "domain" => Ok(Attribute::Domain),
            "typeofspeech" | "tos" => Ok(Attribute::TypeOfSpeech),
            _ => Err(Error::UnknownAttribute(s.to_string())),
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
