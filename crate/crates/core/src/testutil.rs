use crate::model::Instance;
use crate::scalar::Scalar;

pub fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

pub fn sv(texts: &[&str]) -> Vec<Scalar> {
    texts.iter().map(|t| s(t)).collect()
}

pub fn example1() -> Instance {
    crate::fixtures::example_one()
}
