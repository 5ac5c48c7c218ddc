//! The five conventional query modification strategies.
//!
//! With candidate terms `t1, t2, ...` the reformulation patterns are:
//!
//! * S1:  `{t1}; {t2}; {t3}; ...`
//! * S2:  `{t1, t2}; {t1, t3}; {t1, t4}; ...`
//! * S2′: `{t1, t2, t3}; {t1, t2, t4}; {t1, t2, t5}; ...`
//! * S3:  `{t1}; {t1, t2}; {t1, t2, t3}; ...`
//! * S3′: `{t1, t2, t3}; {t1, t2, t3, t4}; ...`

use super::{SimError, StrategyId};
use crate::lm::CandidateList;
use crate::text::{Term, TermSequence};

/// Generates up to `n` reformulations following the strategy's pattern.
///
/// When the candidate list is too short for `n` reformulations the output
/// is truncated; callers detect this by comparing the returned length
/// against `n`.
pub fn generate_conventional(
    candidates: &CandidateList,
    strategy: &StrategyId,
    n: usize,
) -> Result<Vec<TermSequence>, SimError> {
    if !strategy.is_conventional() {
        return Err(SimError::NotConventional(strategy.to_string()));
    }
    let terms: Vec<&Term> = candidates.terms().iter().map(|(t, _)| t).collect();
    let len = terms.len();
    let seq = |indices: &[usize]| -> TermSequence {
        indices.iter().map(|&i| terms[i].clone()).collect()
    };
    let mut queries = Vec::with_capacity(n);
    for i in 0..n {
        let query = match strategy {
            StrategyId::S1 => {
                if i >= len {
                    break;
                }
                seq(&[i])
            }
            StrategyId::S2 => {
                if i + 1 >= len {
                    break;
                }
                seq(&[0, i + 1])
            }
            StrategyId::S2Prime => {
                if i + 2 >= len {
                    break;
                }
                seq(&[0, 1, i + 2])
            }
            StrategyId::S3 => {
                if i >= len {
                    break;
                }
                seq(&(0..=i).collect::<Vec<_>>())
            }
            StrategyId::S3Prime => {
                if i + 2 >= len {
                    break;
                }
                seq(&(0..=i + 2).collect::<Vec<_>>())
            }
            _ => unreachable!("checked by is_conventional"),
        };
        queries.push(query);
    }
    Ok(queries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lm::CandidateSource;

    fn symbolic(n: usize) -> CandidateList {
        let terms: Vec<(Term, f64)> = (1..=n)
            .map(|i| (Term::new(format!("t{i}")).unwrap(), (n - i + 1) as f64))
            .collect();
        CandidateList::from_parts(CandidateSource::Topic, terms)
    }

    fn render(queries: &[TermSequence]) -> Vec<String> {
        queries.iter().map(TermSequence::to_query_string).collect()
    }

    #[test]
    fn s2_spec_example() {
        let queries = generate_conventional(&symbolic(5), &StrategyId::S2, 3).unwrap();
        assert_eq!(render(&queries), ["t1 t2", "t1 t3", "t1 t4"]);
    }

    #[test]
    fn s3_prime_spec_example() {
        let queries = generate_conventional(&symbolic(5), &StrategyId::S3Prime, 2).unwrap();
        assert_eq!(render(&queries), ["t1 t2 t3", "t1 t2 t3 t4"]);
    }

    #[test]
    fn s1_truncates_when_candidates_run_out() {
        let queries = generate_conventional(&symbolic(1), &StrategyId::S1, 3).unwrap();
        assert_eq!(render(&queries), ["t1"]);
    }

    #[test]
    fn all_five_patterns() {
        let c = symbolic(8);
        assert_eq!(
            render(&generate_conventional(&c, &StrategyId::S1, 3).unwrap()),
            ["t1", "t2", "t3"]
        );
        assert_eq!(
            render(&generate_conventional(&c, &StrategyId::S2Prime, 3).unwrap()),
            ["t1 t2 t3", "t1 t2 t4", "t1 t2 t5"]
        );
        assert_eq!(
            render(&generate_conventional(&c, &StrategyId::S3, 3).unwrap()),
            ["t1", "t1 t2", "t1 t2 t3"]
        );
    }

    #[test]
    fn qcm_strategy_is_rejected() {
        let err = generate_conventional(
            &symbolic(5),
            &StrategyId::S4(super::super::QcmParams::preset_s4()),
            3,
        )
        .unwrap_err();
        assert!(matches!(err, SimError::NotConventional(_)));
    }
}
