//! Deterministic synthetic collision corpus with planted fraud rings,
//! used in place of real insurance data for development and testing.

use crate::error::{Error, Result};
use crate::evaluate::ClassLabel;
use crate::ingest::{CollisionRecord, LocationKind, ParticipantEntry, Role, Sex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub background_collisions: usize,
    pub ring_count: usize,
    /// Participants per planted ring.
    pub ring_size: usize,
    /// Staged collisions per ring.
    pub ring_collisions: usize,
    /// Probability a ring collision reuses ring members and vehicles
    /// instead of pulling in an outside victim.
    pub ring_reuse: f64,
    /// Probability a ring collision carries the classic red flags
    /// (night, non-urban, young male driver).
    pub red_flag_intensity: f64,
    /// How many background participants receive an explicit
    /// non-fraudster label; the rest stay unlabeled.
    pub labeled_non_fraudsters: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.ring_count > 0 && (self.ring_size < 2 || self.ring_collisions == 0) {
            return Err(Error::BadSynthSpec(
                "rings need at least 2 members and 1 collision".into(),
            ));
        }
        for p in [self.ring_reuse, self.red_flag_intensity] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::BadSynthSpec(format!("probability {p} out of range")));
            }
        }
        Ok(())
    }
}

/// Preset shaped after a mid-2000s national collision data set:
/// roughly 3451 participants in 1561 collisions, with 5 planted rings
/// totalling 45 fraudsters and 165 labeled non-fraudsters.
pub fn paper_shape_preset() -> SynthSpec {
    SynthSpec {
        background_collisions: 1531,
        ring_count: 5,
        ring_size: 9,
        ring_collisions: 6,
        ring_reuse: 0.8,
        red_flag_intensity: 0.9,
        labeled_non_fraudsters: 165,
        seed: 0,
    }
}

struct Gen {
    rng: ChaCha8Rng,
    records: Vec<CollisionRecord>,
    labels: BTreeMap<String, ClassLabel>,
    victim_seq: usize,
}

impl Gen {
    fn timestamp(&mut self, night: bool) -> String {
        let month = self.rng.gen_range(1..=12u32);
        let day = self.rng.gen_range(1..=28u32);
        let hour = if night {
            (22 + self.rng.gen_range(0..6u32)) % 24
        } else {
            self.rng.gen_range(7..20u32)
        };
        let minute = self.rng.gen_range(0..60u32);
        format!("2006-{month:02}-{day:02}T{hour:02}:{minute:02}:00Z")
    }

    fn sex(&mut self) -> Sex {
        if self.rng.gen_bool(0.55) {
            Sex::Male
        } else {
            Sex::Female
        }
    }

    fn claim(&mut self, staged: bool) -> f64 {
        // Staged collisions claim modest, hard-to-dispute amounts.
        let base = if staged {
            self.rng.gen_range(800.0..1900.0)
        } else {
            self.rng.gen_range(300.0..12000.0)
        };
        (base * 100.0_f64).round() / 100.0
    }
}

/// Generates the corpus and its ground-truth labels. Identical specs
/// produce bitwise-identical output.
pub fn generate(spec: &SynthSpec) -> Result<(Vec<CollisionRecord>, BTreeMap<String, ClassLabel>)> {
    spec.validate()?;
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        records: Vec::new(),
        labels: BTreeMap::new(),
        victim_seq: 0,
    };

    for ring in 0..spec.ring_count {
        emit_ring(&mut g, spec, ring);
    }
    let background_participants = emit_background(&mut g, spec);

    // Label a deterministic sample of background participants as
    // vetted non-fraudsters; outside victims of ring collisions are
    // already labeled.
    let already: usize = g
        .labels
        .values()
        .filter(|&&l| l == ClassLabel::NonFraudster)
        .count();
    let need = spec.labeled_non_fraudsters.saturating_sub(already);
    let step = (background_participants.len() / need.max(1)).max(1);
    for id in background_participants.iter().step_by(step).take(need) {
        g.labels.insert(id.clone(), ClassLabel::NonFraudster);
    }
    for r in &g.records {
        for p in &r.participants {
            g.labels
                .entry(p.participant_id.clone())
                .or_insert(ClassLabel::Unlabeled);
        }
    }

    g.records.sort_by(|a, b| a.collision_id.cmp(&b.collision_id));
    for r in &g.records {
        r.validate()?;
    }
    Ok((g.records, g.labels))
}

fn emit_ring(g: &mut Gen, spec: &SynthSpec, ring: usize) {
    let members: Vec<String> = (0..spec.ring_size)
        .map(|i| format!("r{ring:02}p{i:02}"))
        .collect();
    let vehicles: Vec<String> = (0..spec.ring_size)
        .map(|i| format!("r{ring:02}v{i:02}"))
        .collect();
    // Ring members skew young and male, one of the classic red flags.
    let profiles: Vec<(u32, Sex)> = (0..spec.ring_size)
        .map(|_| {
            let age = g.rng.gen_range(19..30u32);
            (age, Sex::Male)
        })
        .collect();
    for m in &members {
        g.labels.insert(m.clone(), ClassLabel::Fraudster);
    }

    // Collisions chain through the membership (member k crashes into
    // member k+1) so the staged history forms one connected component.
    // The remaining seats go to the least-used members, keeping every
    // member involved in at least two collisions when seats allow.
    let mut appearances = vec![0usize; spec.ring_size];
    for k in 0..spec.ring_collisions {
        let red_flag = g.rng.gen_bool(spec.red_flag_intensity);
        let a = k % spec.ring_size;
        let b = (k + 1) % spec.ring_size;
        appearances[a] += 1;
        let guilty = &members[a];
        let guilty_profile = profiles[a];
        let vehicle_a = vehicles[a].clone();

        // The second car is another ring member's, or an outside
        // victim's when the ring does not reuse its own. A victim
        // displaces the scheduled member into the passenger seat so
        // the chain stays intact.
        let (other_id, other_profile, vehicle_b, victim) =
            if b != a && g.rng.gen_bool(spec.ring_reuse) {
                appearances[b] += 1;
                (members[b].clone(), profiles[b], vehicles[b].clone(), false)
            } else {
                g.victim_seq += 1;
                let id = format!("victim{:04}", g.victim_seq);
                let profile = (g.rng.gen_range(25..70u32), g.sex());
                let vehicle = format!("victimv{:04}", g.victim_seq);
                (id, profile, vehicle, true)
            };
        if victim {
            g.labels.insert(other_id.clone(), ClassLabel::NonFraudster);
        }

        let mut participants = vec![
            ParticipantEntry {
                participant_id: guilty.clone(),
                role: Role::Driver,
                guilt_flag: true,
                vehicle_id: vehicle_a.clone(),
                age: guilty_profile.0,
                sex: guilty_profile.1,
                injury_severity: 2,
                claimed_amount: g.claim(true),
            },
            ParticipantEntry {
                participant_id: other_id,
                role: Role::Driver,
                guilt_flag: false,
                vehicle_id: vehicle_b.clone(),
                age: other_profile.0,
                sex: other_profile.1,
                // Outside victims report ordinary, verifiable damage.
                injury_severity: if victim { 0 } else { 2 },
                claimed_amount: if victim { g.claim(false) } else { g.claim(true) },
            },
        ];
        // A victim displaces the scheduled member into the passenger
        // seat; one more ride-along comes from the members seen least.
        let mut riders: Vec<usize> = Vec::new();
        if victim && b != a {
            riders.push(b);
        }
        for _ in 0..1 {
            let c = (0..spec.ring_size)
                .filter(|&i| i != a && (i != b || victim) && !riders.contains(&i))
                .min_by_key(|&i| (appearances[i], std::cmp::Reverse(i)));
            if let Some(c) = c {
                if !riders.contains(&c) {
                    riders.push(c);
                }
            }
        }
        for c in riders {
            appearances[c] += 1;
            participants.push(ParticipantEntry {
                participant_id: members[c].clone(),
                role: Role::Passenger,
                guilt_flag: false,
                vehicle_id: vehicle_a.clone(),
                age: profiles[c].0,
                sex: profiles[c].1,
                injury_severity: g.rng.gen_range(2..=3),
                claimed_amount: g.claim(true),
            });
        }

        let night = red_flag || g.rng.gen_bool(0.15);
        let timestamp = g.timestamp(night);
        g.records.push(CollisionRecord {
            collision_id: format!("cr{ring:02}_{k:02}"),
            timestamp,
            location_kind: if red_flag {
                LocationKind::NonUrban
            } else if g.rng.gen_bool(0.3) {
                LocationKind::NonUrban
            } else {
                LocationKind::Urban
            },
            night_flag: night,
            vehicle_ids: vec![vehicle_a, vehicle_b],
            participants,
        });
    }
}

fn emit_background(g: &mut Gen, spec: &SynthSpec) -> Vec<String> {
    let mut participants: Vec<String> = Vec::new();
    let mut seq = 0usize;
    let fresh = |g: &mut Gen, participants: &mut Vec<String>, seq: &mut usize| {
        // A sliver of reuse: ordinary drivers occasionally crash twice.
        if !participants.is_empty() && g.rng.gen_bool(0.015) {
            let i = g.rng.gen_range(0..participants.len());
            participants[i].clone()
        } else {
            *seq += 1;
            let id = format!("b{:05}", *seq);
            participants.push(id.clone());
            id
        }
    };

    for k in 0..spec.background_collisions {
        let night = g.rng.gen_bool(0.15);
        let non_urban = g.rng.gen_bool(0.3);
        let d1 = fresh(g, &mut participants, &mut seq);
        let mut d2 = fresh(g, &mut participants, &mut seq);
        while d2 == d1 {
            d2 = fresh(g, &mut participants, &mut seq);
        }
        let v1 = format!("bv{:05}a", k + 1);
        let v2 = format!("bv{:05}b", k + 1);
        let guilty_first = g.rng.gen_bool(0.5);
        let someone_guilty = g.rng.gen_bool(0.85);
        let mut entries = Vec::new();
        for (i, (id, v)) in [(d1, v1.clone()), (d2, v2.clone())].into_iter().enumerate() {
            entries.push(ParticipantEntry {
                participant_id: id,
                role: Role::Driver,
                guilt_flag: someone_guilty && (i == 0) == guilty_first,
                vehicle_id: v,
                age: g.rng.gen_range(18..78),
                sex: g.sex(),
                injury_severity: if g.rng.gen_bool(0.75) {
                    0
                } else {
                    g.rng.gen_range(1..=3)
                },
                claimed_amount: g.claim(false),
            });
        }
        if g.rng.gen_bool(0.22) {
            let p = fresh(g, &mut participants, &mut seq);
            if entries.iter().all(|e| e.participant_id != p) {
                let vehicle = if g.rng.gen_bool(0.5) { v1.clone() } else { v2.clone() };
                entries.push(ParticipantEntry {
                    participant_id: p,
                    role: Role::Passenger,
                    guilt_flag: false,
                    vehicle_id: vehicle,
                    age: g.rng.gen_range(5..78),
                    sex: g.sex(),
                    injury_severity: if g.rng.gen_bool(0.8) {
                        0
                    } else {
                        g.rng.gen_range(1..=2)
                    },
                    claimed_amount: g.claim(false),
                });
            }
        }
        let timestamp = g.timestamp(night);
        g.records.push(CollisionRecord {
            collision_id: format!("cb{:05}", k + 1),
            timestamp,
            location_kind: if non_urban {
                LocationKind::NonUrban
            } else {
                LocationKind::Urban
            },
            night_flag: night,
            vehicle_ids: vec![v1, v2],
            participants: entries,
        });
    }
    participants.sort();
    participants.dedup();
    participants
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn deterministic_under_seed() {
        let spec = SynthSpec {
            background_collisions: 50,
            ring_count: 2,
            ring_size: 5,
            ring_collisions: 4,
            ring_reuse: 0.8,
            red_flag_intensity: 0.5,
            labeled_non_fraudsters: 20,
            seed: 123,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn no_rings_no_fraudsters() {
        let spec = SynthSpec {
            background_collisions: 30,
            ring_count: 0,
            ring_size: 0,
            ring_collisions: 0,
            ring_reuse: 0.5,
            red_flag_intensity: 0.5,
            labeled_non_fraudsters: 10,
            seed: 1,
        };
        let (_, labels) = generate(&spec).unwrap();
        assert!(labels.values().all(|&l| l != ClassLabel::Fraudster));
        assert_eq!(
            labels.values().filter(|&&l| l == ClassLabel::NonFraudster).count(),
            10
        );
    }

    #[test]
    fn contradictory_spec_rejected() {
        let mut spec = paper_shape_preset();
        spec.ring_size = 0;
        assert!(generate(&spec).is_err());
        let mut spec = paper_shape_preset();
        spec.ring_reuse = 1.5;
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn preset_hits_population_shape() {
        let mut spec = paper_shape_preset();
        spec.seed = 7;
        let (records, labels) = generate(&spec).unwrap();
        let collisions = records.len();
        assert!((1405..=1717).contains(&collisions), "collisions {collisions}");
        let participants: BTreeSet<&str> = records
            .iter()
            .flat_map(|r| r.participants.iter().map(|p| p.participant_id.as_str()))
            .collect();
        let n = participants.len();
        assert!((3106..=3796).contains(&n), "participants {n}");
        let fraud = labels.values().filter(|&&l| l == ClassLabel::Fraudster).count();
        assert!((42..=50).contains(&fraud), "fraudsters {fraud}");
        let nonfraud = labels
            .values()
            .filter(|&&l| l == ClassLabel::NonFraudster)
            .count();
        assert!((149..=181).contains(&nonfraud), "non-fraudsters {nonfraud}");
    }

    #[test]
    fn round_trip_through_csv() {
        let spec = SynthSpec {
            background_collisions: 40,
            ring_count: 1,
            ring_size: 6,
            ring_collisions: 5,
            ring_reuse: 0.8,
            red_flag_intensity: 0.6,
            labeled_non_fraudsters: 10,
            seed: 9,
        };
        let (records, _) = generate(&spec).unwrap();
        let mut buf = Vec::new();
        crate::ingest::write_csv(&records, &mut buf).unwrap();
        let parsed =
            crate::ingest::parse_collisions(buf.as_slice(), crate::ingest::SourceFormat::Csv)
                .unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn ring_members_recur_background_drivers_mostly_do_not() {
        let mut ring_multi = 0usize;
        let mut ring_total = 0usize;
        let mut bg_single = 0usize;
        let mut bg_total = 0usize;
        for seed in 0..20 {
            let spec = SynthSpec {
                background_collisions: 200,
                ring_count: 2,
                ring_size: 7,
                ring_collisions: 6,
                ring_reuse: 0.85,
                red_flag_intensity: 0.5,
                labeled_non_fraudsters: 20,
                seed,
            };
            let (records, labels) = generate(&spec).unwrap();
            let mut appearances: BTreeMap<&str, usize> = BTreeMap::new();
            for r in &records {
                for p in &r.participants {
                    *appearances.entry(p.participant_id.as_str()).or_default() += 1;
                }
            }
            for (id, count) in &appearances {
                match labels[*id] {
                    ClassLabel::Fraudster => {
                        ring_total += 1;
                        if *count >= 2 {
                            ring_multi += 1;
                        }
                    }
                    _ if id.starts_with('b') => {
                        bg_total += 1;
                        if *count == 1 {
                            bg_single += 1;
                        }
                    }
                    _ => {}
                }
            }
        }
        assert!(ring_multi as f64 / ring_total as f64 > 0.5);
        assert!(bg_single as f64 / bg_total as f64 > 0.9);
    }

    #[test]
    fn ring_driver_ratio_below_background() {
        let spec = SynthSpec {
            background_collisions: 1500,
            ring_count: 5,
            ring_size: 8,
            ring_collisions: 6,
            ring_reuse: 0.8,
            red_flag_intensity: 0.5,
            labeled_non_fraudsters: 100,
            seed: 4,
        };
        let (records, _) = generate(&spec).unwrap();
        let ratio = |pred: &dyn Fn(&str) -> bool| {
            let subset: Vec<_> = records
                .iter()
                .filter(|r| pred(&r.collision_id))
                .collect();
            let drivers: BTreeSet<&str> = subset
                .iter()
                .flat_map(|r| r.drivers().map(|p| p.participant_id.as_str()))
                .collect();
            drivers.len() as f64 / subset.len() as f64
        };
        let ring = ratio(&|id: &str| id.starts_with("cr"));
        let background = ratio(&|id: &str| id.starts_with("cb"));
        assert!(ring < background, "ring {ring} background {background}");
    }
}
