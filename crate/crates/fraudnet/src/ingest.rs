//! Collision record schema, CSV/JSON parsing with invariant validation,
//! and construction of the four collision network types.
//!
//! CSV schema: one row per participant with columns `collision_id,
//! timestamp, location_kind, night_flag, participant_id, role, guilt_flag,
//! vehicle_id, age, sex, injury_severity, claimed_amount`. JSON is an
//! array of [`CollisionRecord`] objects.

use crate::attrs::{AttrMap, AttrValue};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeLabel, Network, NetworkBuilder, VertexKind, VertexLabel};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocationKind {
    Urban,
    NonUrban,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Driver,
    Passenger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sex {
    Male,
    Female,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantEntry {
    pub participant_id: String,
    pub role: Role,
    #[serde(default)]
    pub guilt_flag: bool,
    pub vehicle_id: String,
    pub age: u32,
    pub sex: Sex,
    pub injury_severity: u8,
    pub claimed_amount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionRecord {
    pub collision_id: String,
    pub timestamp: String,
    pub location_kind: LocationKind,
    pub night_flag: bool,
    pub participants: Vec<ParticipantEntry>,
    pub vehicle_ids: Vec<String>,
}

impl CollisionRecord {
    pub fn validate(&self) -> Result<()> {
        let fail = |rule: &str| {
            Err(Error::InvalidRecord {
                collision_id: self.collision_id.clone(),
                rule: rule.to_string(),
            })
        };
        if self.participants.is_empty() {
            return fail("at least one participant required");
        }
        let vehicles: BTreeSet<&str> = self.vehicle_ids.iter().map(String::as_str).collect();
        if vehicles.len() != self.vehicle_ids.len() {
            return fail("duplicate vehicle id");
        }
        let mut drivers_per_vehicle: BTreeMap<&str, usize> = BTreeMap::new();
        let mut guilty_drivers = 0;
        for p in &self.participants {
            if !vehicles.contains(p.vehicle_id.as_str()) {
                return fail("participant references a vehicle not in the collision");
            }
            match p.role {
                Role::Driver => {
                    *drivers_per_vehicle.entry(p.vehicle_id.as_str()).or_default() += 1;
                    if p.guilt_flag {
                        guilty_drivers += 1;
                    }
                }
                Role::Passenger => {
                    if p.guilt_flag {
                        return fail("passenger cannot carry a guilt flag");
                    }
                }
            }
            if p.injury_severity > 3 {
                return fail("injury severity out of range 0-3");
            }
        }
        if guilty_drivers > 1 {
            return fail("more than one guilty driver");
        }
        for v in &vehicles {
            if drivers_per_vehicle.get(v).copied().unwrap_or(0) != 1 {
                return fail("every vehicle needs exactly one driver");
            }
        }
        Ok(())
    }

    pub fn drivers(&self) -> impl Iterator<Item = &ParticipantEntry> {
        self.participants.iter().filter(|p| p.role == Role::Driver)
    }

    pub fn guilty_driver(&self) -> Option<&ParticipantEntry> {
        self.drivers().find(|p| p.guilt_flag)
    }

    pub fn driver_of_vehicle(&self, vehicle_id: &str) -> Option<&ParticipantEntry> {
        self.drivers().find(|p| p.vehicle_id == vehicle_id)
    }

    pub fn passengers_of_vehicle(&self, vehicle_id: &str) -> usize {
        self.participants
            .iter()
            .filter(|p| p.role == Role::Passenger && p.vehicle_id == vehicle_id)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Drivers,
    Participants,
    Copta,
    Vehicles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    Csv,
    Json,
}

#[derive(Debug, Deserialize, Serialize)]
struct CsvRow {
    collision_id: String,
    timestamp: String,
    location_kind: String,
    night_flag: bool,
    participant_id: String,
    role: String,
    guilt_flag: bool,
    vehicle_id: String,
    age: u32,
    sex: String,
    injury_severity: u8,
    claimed_amount: f64,
}

/// Parses and validates collision records; output is ordered by
/// collision id.
pub fn parse_collisions(source: impl Read, format: SourceFormat) -> Result<Vec<CollisionRecord>> {
    let mut records = match format {
        SourceFormat::Csv => parse_csv(source)?,
        SourceFormat::Json => serde_json::from_reader::<_, Vec<CollisionRecord>>(source)?,
    };
    records.sort_by(|a, b| a.collision_id.cmp(&b.collision_id));
    for r in &records {
        r.validate()?;
    }
    Ok(records)
}

fn parse_csv(source: impl Read) -> Result<Vec<CollisionRecord>> {
    let mut reader = csv::Reader::from_reader(source);
    let mut by_collision: BTreeMap<String, CollisionRecord> = BTreeMap::new();
    for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
        let rownum = i + 2; // header is line 1
        let row = row.map_err(|e| Error::ParseRow {
            file: "<csv>".into(),
            row: rownum,
            msg: e.to_string(),
        })?;
        let bad = |msg: String| Error::ParseRow {
            file: "<csv>".into(),
            row: rownum,
            msg,
        };
        let location_kind = match row.location_kind.as_str() {
            "urban" => LocationKind::Urban,
            "non-urban" => LocationKind::NonUrban,
            other => return Err(bad(format!("unknown location_kind `{other}`"))),
        };
        let role = match row.role.as_str() {
            "driver" => Role::Driver,
            "passenger" => Role::Passenger,
            other => return Err(bad(format!("unknown role `{other}`"))),
        };
        let sex = match row.sex.as_str() {
            "male" => Sex::Male,
            "female" => Sex::Female,
            other => return Err(bad(format!("unknown sex `{other}`"))),
        };
        let rec = by_collision
            .entry(row.collision_id.clone())
            .or_insert_with(|| CollisionRecord {
                collision_id: row.collision_id.clone(),
                timestamp: row.timestamp.clone(),
                location_kind,
                night_flag: row.night_flag,
                participants: Vec::new(),
                vehicle_ids: Vec::new(),
            });
        if !rec.vehicle_ids.contains(&row.vehicle_id) {
            rec.vehicle_ids.push(row.vehicle_id.clone());
        }
        rec.participants.push(ParticipantEntry {
            participant_id: row.participant_id,
            role,
            guilt_flag: row.guilt_flag,
            vehicle_id: row.vehicle_id,
            age: row.age,
            sex,
            injury_severity: row.injury_severity,
            claimed_amount: row.claimed_amount,
        });
    }
    Ok(by_collision.into_values().collect())
}

pub fn write_csv(records: &[CollisionRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        for p in &r.participants {
            w.serialize(CsvRow {
                collision_id: r.collision_id.clone(),
                timestamp: r.timestamp.clone(),
                location_kind: match r.location_kind {
                    LocationKind::Urban => "urban".into(),
                    LocationKind::NonUrban => "non-urban".into(),
                },
                night_flag: r.night_flag,
                participant_id: p.participant_id.clone(),
                role: match p.role {
                    Role::Driver => "driver".into(),
                    Role::Passenger => "passenger".into(),
                },
                guilt_flag: p.guilt_flag,
                vehicle_id: p.vehicle_id.clone(),
                age: p.age,
                sex: match p.sex {
                    Sex::Male => "male".into(),
                    Sex::Female => "female".into(),
                },
                injury_severity: p.injury_severity,
                claimed_amount: p.claimed_amount,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Builds the requested network type from validated records.
pub fn build_network(records: &[CollisionRecord], kind: NetworkKind) -> Network {
    let mut b = NetworkBuilder::new();
    match kind {
        NetworkKind::Drivers => {
            for r in records {
                add_driver_edges(&mut b, r);
            }
        }
        NetworkKind::Participants => {
            for r in records {
                add_driver_edges(&mut b, r);
                for p in &r.participants {
                    if p.role == Role::Passenger {
                        let pv = b.vertex(participant_label(p));
                        if let Some(d) = r.driver_of_vehicle(&p.vehicle_id) {
                            let dv = b.vertex(participant_label(d));
                            b.edge(pv, dv, false, EdgeLabel::Passenger);
                        }
                    }
                }
            }
        }
        NetworkKind::Copta => {
            for r in records {
                let cv = b.vertex(collision_label(r));
                for p in &r.participants {
                    let pv = b.vertex(participant_label(p));
                    match p.role {
                        Role::Driver => {
                            let count = r.passengers_of_vehicle(&p.vehicle_id) as u32;
                            // Guilty drivers point at the collision, the
                            // rest are pointed at by it.
                            let (from, to) = if p.guilt_flag { (pv, cv) } else { (cv, pv) };
                            b.edge_with_count(from, to, true, EdgeLabel::Driver, Some(count));
                        }
                        Role::Passenger => {
                            b.edge(pv, cv, false, EdgeLabel::Passenger);
                        }
                    }
                }
            }
        }
        NetworkKind::Vehicles => {
            for r in records {
                let vids: Vec<_> = r
                    .vehicle_ids
                    .iter()
                    .map(|v| b.vertex(VertexLabel::new(VertexKind::Vehicle, v.clone())))
                    .collect();
                match r.guilty_driver() {
                    Some(g) => {
                        let gi = r.vehicle_ids.iter().position(|v| *v == g.vehicle_id).unwrap();
                        for (i, &other) in vids.iter().enumerate() {
                            if i != gi {
                                b.edge(vids[gi], other, true, EdgeLabel::Involved);
                            }
                        }
                    }
                    None => {
                        for i in 0..vids.len() {
                            for j in (i + 1)..vids.len() {
                                b.edge(vids[i], vids[j], false, EdgeLabel::Involved);
                            }
                        }
                    }
                }
                for p in &r.participants {
                    let pv = b.vertex(participant_label(p));
                    let vi = r.vehicle_ids.iter().position(|v| *v == p.vehicle_id).unwrap();
                    let label = match p.role {
                        Role::Driver => EdgeLabel::Driver,
                        Role::Passenger => EdgeLabel::Passenger,
                    };
                    b.edge(pv, vids[vi], false, label);
                }
            }
        }
    }
    attach_attributes(&mut b, records);
    b.build()
}

fn participant_label(p: &ParticipantEntry) -> VertexLabel {
    VertexLabel::new(VertexKind::Participant, p.participant_id.clone())
}

fn collision_label(r: &CollisionRecord) -> VertexLabel {
    VertexLabel::new(VertexKind::Collision, r.collision_id.clone())
}

fn add_driver_edges(b: &mut NetworkBuilder, r: &CollisionRecord) {
    let drivers: Vec<&ParticipantEntry> = r.drivers().collect();
    let ids: Vec<_> = drivers.iter().map(|d| b.vertex(participant_label(d))).collect();
    match drivers.iter().position(|d| d.guilt_flag) {
        Some(gi) => {
            for (i, &other) in ids.iter().enumerate() {
                if i != gi {
                    b.edge(ids[gi], other, true, EdgeLabel::Involved);
                }
            }
        }
        // No recorded guilt: direction would be fabricated, so connect
        // every driver pair undirected.
        None => {
            for i in 0..ids.len() {
                for j in (i + 1)..ids.len() {
                    b.edge(ids[i], ids[j], false, EdgeLabel::Involved);
                }
            }
        }
    }
}

/// Per-vertex attribute bags used by the intrinsic factors. Participant
/// attributes merge across a participant's entries: first-seen age and
/// sex, worst injury, smallest claim, driver role if ever a driver.
fn attach_attributes(b: &mut NetworkBuilder, records: &[CollisionRecord]) {
    for r in records {
        if let Some(cv) = b.lookup(&collision_label(r)) {
            let attrs = b.attrs_mut(cv);
            attrs.insert("night".into(), AttrValue::Bool(r.night_flag));
            attrs.insert(
                "urban".into(),
                AttrValue::Bool(r.location_kind == LocationKind::Urban),
            );
            attrs.insert(
                "participant_count".into(),
                AttrValue::Int(r.participants.len() as i64),
            );
            if let Some(min_age) = r
                .participants
                .iter()
                .filter(|p| p.role == Role::Passenger)
                .map(|p| p.age)
                .min()
            {
                attrs.insert("min_passenger_age".into(), AttrValue::Int(min_age as i64));
            }
        }
        for p in &r.participants {
            let Some(pv) = b.lookup(&participant_label(p)) else {
                continue;
            };
            let attrs = b.attrs_mut(pv);
            attrs.entry("age".into()).or_insert(AttrValue::Int(p.age as i64));
            attrs.entry("sex".into()).or_insert(AttrValue::Text(
                match p.sex {
                    Sex::Male => "male",
                    Sex::Female => "female",
                }
                .into(),
            ));
            if p.role == Role::Driver {
                attrs.insert("role".into(), AttrValue::Text("driver".into()));
            } else {
                attrs
                    .entry("role".into())
                    .or_insert(AttrValue::Text("passenger".into()));
            }
            upgrade_int(attrs, "injury_severity", p.injury_severity as i64, i64::max);
            let claim = p.claimed_amount;
            match attrs.get("claimed_amount") {
                Some(AttrValue::Float(old)) if *old <= claim => {}
                _ => {
                    attrs.insert("claimed_amount".into(), AttrValue::Float(claim));
                }
            }
            let n = match attrs.get("n_collisions") {
                Some(AttrValue::Int(n)) => n + 1,
                _ => 1,
            };
            attrs.insert("n_collisions".into(), AttrValue::Int(n));
        }
    }
}

fn upgrade_int(attrs: &mut AttrMap, key: &str, value: i64, pick: fn(i64, i64) -> i64) {
    let new = match attrs.get(key) {
        Some(AttrValue::Int(old)) => pick(*old, value),
        _ => value,
    };
    attrs.insert(key.into(), AttrValue::Int(new));
}

/// Adds an undirected vehicle-link edge between every pair of collision
/// vertices sharing a vehicle. Input must be a COPTA network.
pub fn link_shared_vehicles(net: &Network, records: &[CollisionRecord]) -> Network {
    let mut by_vehicle: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for r in records {
        for v in &r.vehicle_ids {
            by_vehicle.entry(v).or_default().push(&r.collision_id);
        }
    }
    let lookup = |key: &str| {
        net.vertex_ids().find(|&v| {
            let l = net.label(v);
            l.kind == VertexKind::Collision && l.key == key
        })
    };
    let mut extra = Vec::new();
    let mut seen = BTreeSet::new();
    for collisions in by_vehicle.values() {
        for i in 0..collisions.len() {
            for j in (i + 1)..collisions.len() {
                let (Some(a), Some(b)) = (lookup(collisions[i]), lookup(collisions[j])) else {
                    continue;
                };
                if seen.insert((a.min(b), a.max(b))) {
                    extra.push(Edge {
                        a,
                        b,
                        directed: false,
                        label: EdgeLabel::VehicleLink,
                        passenger_count: None,
                    });
                }
            }
        }
    }
    net.with_extra_edges(extra)
}

/// Collision and distinct-driver counts for the component holding the
/// given participant keys; feeds the driver-ratio indicator and the
/// cross-component score normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentMeta {
    pub collisions: usize,
    pub drivers: usize,
}

pub fn component_meta(
    records: &[CollisionRecord],
    member_participants: &BTreeSet<&str>,
) -> ComponentMeta {
    let mut collisions = 0;
    let mut drivers: BTreeSet<&str> = BTreeSet::new();
    for r in records {
        if r.participants
            .iter()
            .any(|p| member_participants.contains(p.participant_id.as_str()))
        {
            collisions += 1;
            for d in r.drivers() {
                drivers.insert(&d.participant_id);
            }
        }
    }
    ComponentMeta {
        collisions,
        drivers: drivers.len(),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub(crate) fn entry(
        id: &str,
        role: Role,
        guilt: bool,
        vehicle: &str,
    ) -> ParticipantEntry {
        ParticipantEntry {
            participant_id: id.into(),
            role,
            guilt_flag: guilt,
            vehicle_id: vehicle.into(),
            age: 35,
            sex: Sex::Male,
            injury_severity: 0,
            claimed_amount: 500.0,
        }
    }

    pub(crate) fn record(id: &str, participants: Vec<ParticipantEntry>) -> CollisionRecord {
        let mut vehicle_ids = Vec::new();
        for p in &participants {
            if !vehicle_ids.contains(&p.vehicle_id) {
                vehicle_ids.push(p.vehicle_id.clone());
            }
        }
        CollisionRecord {
            collision_id: id.into(),
            timestamp: "2006-03-01T23:30:00Z".into(),
            location_kind: LocationKind::NonUrban,
            night_flag: true,
            participants,
            vehicle_ids,
        }
    }

    /// Two collisions sharing driver d2, as in the four-network figure.
    pub(crate) fn shared_driver_fixture() -> Vec<CollisionRecord> {
        vec![
            record(
                "c1",
                vec![
                    entry("d1", Role::Driver, true, "v1"),
                    entry("d2", Role::Driver, false, "v2"),
                    entry("p1", Role::Passenger, false, "v1"),
                ],
            ),
            record(
                "c2",
                vec![
                    entry("d2", Role::Driver, true, "v3"),
                    entry("d3", Role::Driver, false, "v4"),
                    entry("p2", Role::Passenger, false, "v4"),
                ],
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn empty_csv_gives_empty_list() {
        let csv = "collision_id,timestamp,location_kind,night_flag,participant_id,role,guilt_flag,vehicle_id,age,sex,injury_severity,claimed_amount\n";
        let recs = parse_collisions(csv.as_bytes(), SourceFormat::Csv).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let records = shared_driver_fixture();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let parsed = parse_collisions(buf.as_slice(), SourceFormat::Csv).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn two_guilty_drivers_rejected() {
        let r = record(
            "c1",
            vec![
                entry("d1", Role::Driver, true, "v1"),
                entry("d2", Role::Driver, true, "v2"),
            ],
        );
        let err = r.validate().unwrap_err();
        assert!(err.to_string().contains("guilty"));
    }

    #[test]
    fn guilty_passenger_rejected() {
        let r = record(
            "c1",
            vec![
                entry("d1", Role::Driver, false, "v1"),
                entry("p1", Role::Passenger, true, "v1"),
            ],
        );
        assert!(r.validate().is_err());
    }

    #[test]
    fn drivers_network_single_directed_edge() {
        let records = vec![record(
            "c1",
            vec![
                entry("d1", Role::Driver, true, "v1"),
                entry("d2", Role::Driver, false, "v2"),
            ],
        )];
        let net = build_network(&records, NetworkKind::Drivers);
        assert_eq!(net.vertex_count(), 2);
        assert_eq!(net.edge_count(), 1);
        let e = &net.edges()[0];
        assert!(e.directed);
        assert_eq!(net.label(e.a).key, "d1");
    }

    #[test]
    fn shared_driver_copta_is_one_component() {
        let records = shared_driver_fixture();
        let net = build_network(&records, NetworkKind::Copta);
        // 2 collision vertices + 5 distinct participants.
        assert_eq!(net.vertex_count(), 7);
        assert_eq!(net.connected_components().len(), 1);
    }

    #[test]
    fn copta_is_bipartite_before_vehicle_links() {
        let records = shared_driver_fixture();
        let net = build_network(&records, NetworkKind::Copta);
        for e in net.edges() {
            let kinds = (net.label(e.a).kind, net.label(e.b).kind);
            assert!(
                kinds.0 == VertexKind::Collision || kinds.1 == VertexKind::Collision,
                "participant-participant edge in COPTA"
            );
            assert_ne!(kinds.0, kinds.1);
        }
    }

    #[test]
    fn passengers_attach_to_driver_not_each_other() {
        let records = vec![record(
            "c1",
            vec![
                entry("d1", Role::Driver, true, "v1"),
                entry("d2", Role::Driver, false, "v2"),
                entry("p1", Role::Passenger, false, "v1"),
                entry("p2", Role::Passenger, false, "v1"),
            ],
        )];
        let net = build_network(&records, NetworkKind::Participants);
        assert_eq!(net.vertex_count(), 4);
        // One driver-driver edge plus two passenger-driver edges.
        assert_eq!(net.edge_count(), 3);
        let d1 = net
            .vertex_ids()
            .find(|&v| net.label(v).key == "d1")
            .unwrap();
        assert_eq!(net.degree(d1).unwrap(), 3);
    }

    #[test]
    fn participants_network_grouping_weakness() {
        // Two single-passenger collisions on one driver are
        // indistinguishable from one two-passenger collision.
        let two_singles = vec![
            record("c1", vec![entry("d1", Role::Driver, false, "v1"), entry("p1", Role::Passenger, false, "v1")]),
            record("c2", vec![entry("d1", Role::Driver, false, "v2"), entry("p2", Role::Passenger, false, "v2")]),
        ];
        let one_double = vec![record(
            "c9",
            vec![
                entry("d1", Role::Driver, false, "v1"),
                entry("p1", Role::Passenger, false, "v1"),
                entry("p2", Role::Passenger, false, "v1"),
            ],
        )];
        let a = build_network(&two_singles, NetworkKind::Participants);
        let b = build_network(&one_double, NetworkKind::Participants);
        assert_eq!(a.vertex_count(), b.vertex_count());
        let edges = |n: &Network| {
            let mut v: Vec<_> = n
                .edges()
                .iter()
                .map(|e| (n.label(e.a).key.clone(), n.label(e.b).key.clone(), e.label))
                .collect();
            v.sort();
            v
        };
        assert_eq!(edges(&a), edges(&b));
    }

    #[test]
    fn vehicle_links_added_pairwise() {
        let mut records = shared_driver_fixture();
        // Make v2 appear in both collisions.
        records[1].participants[1].vehicle_id = "v2".into();
        records[1].vehicle_ids = vec!["v3".into(), "v2".into()];
        let net = build_network(&records, NetworkKind::Copta);
        let linked = link_shared_vehicles(&net, &records);
        assert_eq!(linked.edge_count(), net.edge_count() + 1);
        let e = linked.edges().last().unwrap();
        assert_eq!(e.label, EdgeLabel::VehicleLink);
    }

    #[test]
    fn no_shared_vehicles_is_identity() {
        let records = shared_driver_fixture();
        let net = build_network(&records, NetworkKind::Copta);
        let linked = link_shared_vehicles(&net, &records);
        assert_eq!(linked.edge_count(), net.edge_count());
    }

    #[test]
    fn three_collisions_sharing_vehicle_link_three_pairs() {
        let records = vec![
            record("c1", vec![entry("a1", Role::Driver, false, "vx")]),
            record("c2", vec![entry("a2", Role::Driver, false, "vx")]),
            record("c3", vec![entry("a3", Role::Driver, false, "vx")]),
        ];
        let net = build_network(&records, NetworkKind::Copta);
        let linked = link_shared_vehicles(&net, &records);
        assert_eq!(linked.edge_count(), net.edge_count() + 3);
    }

    #[test]
    fn build_is_deterministic() {
        let records = shared_driver_fixture();
        let a = build_network(&records, NetworkKind::Copta);
        let b = build_network(&records, NetworkKind::Copta);
        assert_eq!(a.edges(), b.edges());
        assert_eq!(
            a.vertex_ids().map(|v| a.label(v).clone()).collect::<Vec<_>>(),
            b.vertex_ids().map(|v| b.label(v).clone()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn vehicles_network_shape() {
        let records = vec![record(
            "c1",
            vec![
                entry("d1", Role::Driver, true, "v1"),
                entry("d2", Role::Driver, false, "v2"),
                entry("p1", Role::Passenger, false, "v2"),
            ],
        )];
        let net = build_network(&records, NetworkKind::Vehicles);
        // 2 vehicles + 3 participants.
        assert_eq!(net.vertex_count(), 5);
        // guilty->other vehicle edge + 2 driver edges + 1 passenger edge.
        assert_eq!(net.edge_count(), 4);
    }

    #[test]
    fn component_meta_counts() {
        let records = shared_driver_fixture();
        let members: BTreeSet<&str> = ["d1", "d2", "d3", "p1", "p2"].into_iter().collect();
        let meta = component_meta(&records, &members);
        assert_eq!(meta.collisions, 2);
        assert_eq!(meta.drivers, 3);
    }
}
