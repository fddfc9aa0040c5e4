//! Layered link diagrams and their Wirtinger data.
//!
//! A diagram is a list of events read as horizontal layers from the first line (bottom)
//! to the last line (top). Each event acts on the strand positions `pos, pos+1` of the
//! current slice:
//!
//! ```text
//! cup ccw|cw <pos>   # two new strands; ccw: left strand runs down, right runs up
//! cap <pos>          # closes two adjacent strands of opposite direction
//! x+ <pos>           # crossing, the strand entering bottom-left passes over
//! x- <pos>           # crossing, the strand entering bottom-right passes over
//! ```
//!
//! Lines may carry `#` comments; blank lines are ignored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::FramingCoefficient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Cup { pos: usize, orientation: Orientation },
    Cap { pos: usize },
    CrossPos { pos: usize },
    CrossNeg { pos: usize },
}

impl Event {
    pub fn pos(&self) -> usize {
        match *self {
            Event::Cup { pos, .. } | Event::Cap { pos } | Event::CrossPos { pos } | Event::CrossNeg { pos } => pos,
        }
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self, Event::CrossPos { .. } | Event::CrossNeg { .. })
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Event::Cup { pos, orientation: Orientation::Ccw } => write!(f, "cup ccw {pos}"),
            Event::Cup { pos, orientation: Orientation::Cw } => write!(f, "cup cw {pos}"),
            Event::Cap { pos } => write!(f, "cap {pos}"),
            Event::CrossPos { pos } => write!(f, "x+ {pos}"),
            Event::CrossNeg { pos } => write!(f, "x- {pos}"),
        }
    }
}

/// A piece of strand between two consecutive events, oriented up or down the page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub up: bool,
    pub arc: usize,
    pub component: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    /// Index of the event that produced the crossing.
    pub event: usize,
    pub over_seg: usize,
    pub in_seg: usize,
    pub out_seg: usize,
    pub over_arc: usize,
    pub in_arc: usize,
    pub out_arc: usize,
    /// `+1` or `−1`; the relation reads `out = over^(−sign)·in·over^(sign)`.
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub id: usize,
    /// Segments in knot order, starting from the lowest-numbered one.
    pub segments: Vec<usize>,
    /// Crossing indices where this component passes under, in knot order.
    pub undercrossings: Vec<usize>,
    /// Arcs of the component in knot order; the first is the default basepoint.
    pub arcs: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LinkKind {
    Turn,
    Under(usize),
}

/// A parsed and validated diagram with its segments, arcs and components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseDiagram {
    events: Vec<Event>,
    widths: Vec<usize>,
    levels: Vec<Vec<usize>>,
    segments: Vec<Segment>,
    succ: Vec<(usize, LinkKind)>,
    crossings: Vec<Crossing>,
    components: Vec<Component>,
    arc_component: Vec<usize>,
    narcs: usize,
}

fn parse_line(lineno: usize, line: &str) -> Result<Option<Event>> {
    let body = line.split('#').next().unwrap_or("");
    let toks: Vec<&str> = body.split_whitespace().collect();
    if toks.is_empty() {
        return Ok(None);
    }
    let err = |msg: &str| Error::Parse(format!("line {lineno}: {msg}: {:?}", line.trim()));
    let pos = |t: Option<&&str>| -> Result<usize> {
        t.ok_or_else(|| err("missing position"))?.parse::<usize>().map_err(|_| err("bad position"))
    };
    let (ev, used) = match toks[0] {
        "cup" => {
            let orientation = match toks.get(1).copied() {
                Some("ccw") => Orientation::Ccw,
                Some("cw") => Orientation::Cw,
                _ => return Err(err("expected ccw or cw")),
            };
            (Event::Cup { pos: pos(toks.get(2))?, orientation }, 3)
        }
        "cap" => (Event::Cap { pos: pos(toks.get(1))? }, 2),
        "x+" => (Event::CrossPos { pos: pos(toks.get(1))? }, 2),
        "x-" => (Event::CrossNeg { pos: pos(toks.get(1))? }, 2),
        _ => return Err(err("unknown event")),
    };
    if toks.len() > used {
        return Err(err("trailing tokens"));
    }
    Ok(Some(ev))
}

/// Parses and validates diagram text.
pub fn parse_diagram(text: &str) -> Result<MorseDiagram> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(ev) = parse_line(i + 1, line)? {
            events.push(ev);
        }
    }
    MorseDiagram::from_events(events)
}

impl FromStr for MorseDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_diagram(s)
    }
}

impl fmt::Display for MorseDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ev in &self.events {
            writeln!(f, "{ev}")?;
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

impl MorseDiagram {
    pub fn from_events(events: Vec<Event>) -> Result<Self> {
        let mut ups: Vec<bool> = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        let mut levels = vec![Vec::new()];
        let mut widths = vec![0];
        let mut links: Vec<(usize, usize, LinkKind)> = Vec::new();
        let mut raw_cross: Vec<(usize, usize, usize, usize, bool)> = Vec::new();
        for (ei, ev) in events.iter().enumerate() {
            let width = cur.len();
            let topo = |msg: String| Error::Topology(format!("event {} ({ev}): {msg}", ei + 1));
            match *ev {
                Event::Cup { pos, orientation } => {
                    if pos > width {
                        return Err(topo(format!("position {pos} beyond width {width}")));
                    }
                    let ccw = orientation == Orientation::Ccw;
                    let l = ups.len();
                    ups.push(!ccw);
                    ups.push(ccw);
                    let r = l + 1;
                    links.push(if ccw { (l, r, LinkKind::Turn) } else { (r, l, LinkKind::Turn) });
                    cur.splice(pos..pos, [l, r]);
                }
                Event::Cap { pos } => {
                    if pos + 1 >= width {
                        return Err(topo(format!("positions {pos},{} beyond width {width}", pos + 1)));
                    }
                    let (l, r) = (cur[pos], cur[pos + 1]);
                    if ups[l] == ups[r] {
                        return Err(topo("cap joins two strands of the same direction".into()));
                    }
                    links.push(if ups[l] { (l, r, LinkKind::Turn) } else { (r, l, LinkKind::Turn) });
                    cur.drain(pos..pos + 2);
                }
                Event::CrossPos { pos } | Event::CrossNeg { pos } => {
                    if pos + 1 >= width {
                        return Err(topo(format!("positions {pos},{} beyond width {width}", pos + 1)));
                    }
                    let positive = matches!(ev, Event::CrossPos { .. });
                    let (l, r) = (cur[pos], cur[pos + 1]);
                    let (over, under) = if positive { (l, r) } else { (r, l) };
                    let n = ups.len();
                    ups.push(ups[under]);
                    let ci = raw_cross.len();
                    links.push(if ups[under] { (under, n, LinkKind::Under(ci)) } else { (n, under, LinkKind::Under(ci)) });
                    raw_cross.push((ei, over, under, n, positive));
                    if positive {
                        cur[pos] = n;
                        cur[pos + 1] = over;
                    } else {
                        cur[pos] = over;
                        cur[pos + 1] = n;
                    }
                }
            }
            levels.push(cur.clone());
            widths.push(cur.len());
        }
        if !cur.is_empty() {
            return Err(Error::Topology(format!("{} strand(s) left open at the top", cur.len())));
        }

        let nseg = ups.len();
        let mut succ = vec![(usize::MAX, LinkKind::Turn); nseg];
        let mut uf = UnionFind((0..nseg).collect());
        for &(a, b, k) in &links {
            succ[a] = (b, k);
            if k == LinkKind::Turn {
                uf.union(a, b);
            }
        }

        let mut seen = vec![false; nseg];
        let mut comp_segs: Vec<Vec<usize>> = Vec::new();
        for st in 0..nseg {
            if seen[st] {
                continue;
            }
            let mut comp = Vec::new();
            let mut x = st;
            while !seen[x] {
                seen[x] = true;
                comp.push(x);
                x = succ[x].0;
            }
            if x != st {
                return Err(Error::Internal("strand traversal did not close up".into()));
            }
            comp_segs.push(comp);
        }

        let mut arc_of_root = vec![usize::MAX; nseg];
        let mut narcs = 0;
        let mut segments = vec![Segment { up: false, arc: 0, component: 0 }; nseg];
        let mut components = Vec::with_capacity(comp_segs.len());
        for (id, comp) in comp_segs.into_iter().enumerate() {
            let mut arcs = Vec::new();
            let mut unders = Vec::new();
            for &x in &comp {
                let r = uf.find(x);
                if arc_of_root[r] == usize::MAX {
                    arc_of_root[r] = narcs;
                    arcs.push(narcs);
                    narcs += 1;
                }
                segments[x] = Segment { up: ups[x], arc: arc_of_root[r], component: id };
                if let LinkKind::Under(ci) = succ[x].1 {
                    unders.push(ci);
                }
            }
            components.push(Component { id, segments: comp, undercrossings: unders, arcs });
        }

        let crossings = raw_cross
            .into_iter()
            .map(|(event, over, lo, hi, positive)| {
                let up = ups[lo];
                let (inn, out) = if up { (lo, hi) } else { (hi, lo) };
                let so = if ups[over] { 1 } else { -1 };
                let su = if up { 1 } else { -1 };
                let sign = so * su * if positive { 1 } else { -1 };
                Crossing {
                    event,
                    over_seg: over,
                    in_seg: inn,
                    out_seg: out,
                    over_arc: segments[over].arc,
                    in_arc: segments[inn].arc,
                    out_arc: segments[out].arc,
                    sign,
                }
            })
            .collect();

        let mut arc_component = vec![0; narcs];
        for c in &components {
            for &a in &c.arcs {
                arc_component[a] = c.id;
            }
        }
        Ok(Self { events, widths, levels, segments, succ, crossings, components, arc_component, narcs })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Strand count of each slice; entry `k` is the slice below event `k`.
    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// Segment ids of slice `k`, left to right. Slice 0 is empty (below everything).
    pub fn level(&self, k: usize) -> &[usize] {
        &self.levels[k]
    }

    pub fn segment(&self, s: usize) -> Segment {
        self.segments[s]
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.narcs
    }

    pub fn component_of_arc(&self, arc: usize) -> usize {
        self.arc_component[arc]
    }

    /// Sum of the signs of the crossings of component `c` with itself.
    pub fn writhe(&self, c: usize) -> i64 {
        self.crossings
            .iter()
            .filter(|x| self.component_of_arc(x.over_arc) == c && self.component_of_arc(x.in_arc) == c)
            .map(|x| x.sign)
            .sum()
    }

    /// Linking number of two distinct components: half the signed count of their mutual crossings.
    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        assert_ne!(i, j);
        let s: i64 = self
            .crossings
            .iter()
            .filter(|x| {
                let (a, b) = (self.component_of_arc(x.over_arc), self.component_of_arc(x.in_arc));
                (a, b) == (i, j) || (a, b) == (j, i)
            })
            .map(|x| x.sign)
            .sum();
        s / 2
    }

    /// The mirror image: every crossing switched.
    pub fn mirror(&self) -> Self {
        let events = self
            .events
            .iter()
            .map(|e| match *e {
                Event::CrossPos { pos } => Event::CrossNeg { pos },
                Event::CrossNeg { pos } => Event::CrossPos { pos },
                other => other,
            })
            .collect();
        Self::from_events(events).expect("mirroring preserves validity")
    }

    /// Wirtinger data with the default basepoint on every component.
    pub fn wirtinger(&self) -> WirtingerPresentation {
        self.wirtinger_with_basepoints(&vec![None; self.components.len()]).expect("default basepoints are valid")
    }

    /// Wirtinger data with per-component basepoint overrides (arc ids).
    pub fn wirtinger_with_basepoints(&self, basepoints: &[Option<usize>]) -> Result<WirtingerPresentation> {
        if basepoints.len() != self.components.len() {
            return Err(Error::Validation(format!(
                "{} basepoints given for {} components",
                basepoints.len(),
                self.components.len()
            )));
        }
        let relations = self
            .crossings
            .iter()
            .map(|c| Relation { out_arc: c.out_arc, over_arc: c.over_arc, in_arc: c.in_arc, sign: c.sign })
            .collect();
        let mut meridians = Vec::new();
        let mut walks = Vec::new();
        let mut longitude_words = Vec::new();
        let mut writhes = Vec::new();
        for (comp, bp) in self.components.iter().zip(basepoints) {
            let base = match bp {
                None => comp.arcs[0],
                Some(a) if comp.arcs.contains(a) => *a,
                Some(a) => {
                    return Err(Error::Validation(format!("basepoint arc {a} is not on component {}", comp.id)))
                }
            };
            let mut walk = comp.undercrossings.clone();
            if !walk.is_empty() {
                let k = walk.iter().position(|&ci| self.crossings[ci].in_arc == base).ok_or_else(|| {
                    Error::Internal(format!("no undercrossing leaves basepoint arc {base}"))
                })?;
                walk.rotate_left(k);
            }
            let w = self.writhe(comp.id);
            let mut word: Vec<(usize, i64)> =
                walk.iter().map(|&ci| (self.crossings[ci].over_arc, self.crossings[ci].sign)).collect();
            if w != 0 {
                word.push((base, -w));
            }
            meridians.push(base);
            walks.push(walk);
            longitude_words.push(word);
            writhes.push(w);
        }
        Ok(WirtingerPresentation { arcs: self.narcs, relations, meridians, walks, longitude_words, writhes })
    }

    /// Next segment in knot order.
    pub fn successor(&self, s: usize) -> usize {
        self.succ[s].0
    }
}

/// `out = over^(−sign)·in·over^(sign)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub out_arc: usize,
    pub over_arc: usize,
    pub in_arc: usize,
    pub sign: i64,
}

/// Generators are arcs; relations are indexed like [`MorseDiagram::crossings`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WirtingerPresentation {
    pub arcs: usize,
    pub relations: Vec<Relation>,
    /// Basepoint arc of each component; its generator is the meridian.
    pub meridians: Vec<usize>,
    /// Undercrossings of each component in knot order, starting at the one that ends the
    /// basepoint arc.
    pub walks: Vec<Vec<usize>>,
    /// Seifert-framed longitude of each component as `(arc, exponent)` letters.
    pub longitude_words: Vec<Vec<(usize, i64)>>,
    pub writhes: Vec<i64>,
}

/// A link diagram with one surgery coefficient per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryPresentation {
    pub diagram: MorseDiagram,
    pub coefficients: Vec<FramingCoefficient>,
}

impl SurgeryPresentation {
    pub fn new(diagram: MorseDiagram, coefficients: Vec<FramingCoefficient>) -> Result<Self> {
        if coefficients.len() != diagram.num_components() {
            return Err(Error::Validation(format!(
                "{} surgery coefficients for {} components",
                coefficients.len(),
                diagram.num_components()
            )));
        }
        Ok(Self { diagram, coefficients })
    }

    /// The same link with every `q` negated; for amphichiral links this presents `−M`.
    pub fn reversed_coefficients(&self) -> Self {
        Self { diagram: self.diagram.clone(), coefficients: self.coefficients.iter().map(|c| c.mirrored()).collect() }
    }

    /// Mirror diagram with every `q` negated: always a presentation of `−M`.
    pub fn orientation_reversed(&self) -> Self {
        Self { diagram: self.diagram.mirror(), coefficients: self.coefficients.iter().map(|c| c.mirrored()).collect() }
    }
}
