//! Text renderings of articulation scripts.

use super::{ArticulationScript, QuantJoint};
use crate::kinematics::JointKind;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(super) enum Style {
    Human,
    Tokens,
}

impl Style {
    fn layout_start(&self) -> &'static str {
        match self {
            Style::Human => "<|layout_s|>",
            Style::Tokens => "<|layout_start|>",
        }
    }

    fn layout_end(&self) -> &'static str {
        match self {
            Style::Human => "<|layout_e|>",
            Style::Tokens => "<|layout_end|>",
        }
    }

    fn art_start(&self) -> &'static str {
        match self {
            Style::Human => "<|art_s|>",
            Style::Tokens => "<|art_start|>",
        }
    }

    fn art_end(&self) -> &'static str {
        match self {
            Style::Human => "<|art_e|>",
            Style::Tokens => "<|art_end|>",
        }
    }

    fn pos(&self, bin: u32) -> String {
        match self {
            Style::Human => bin.to_string(),
            Style::Tokens => format!("<P_{bin}>"),
        }
    }

    fn dir(&self, code: u32) -> String {
        match self {
            Style::Human => code.to_string(),
            Style::Tokens => format!("<D_{code}>"),
        }
    }

    fn rot(&self, bin: u32) -> String {
        match self {
            Style::Human => bin.to_string(),
            Style::Tokens => format!("<LR_{bin}>"),
        }
    }

    fn trans(&self, bin: u32) -> String {
        match self {
            Style::Human => bin.to_string(),
            Style::Tokens => format!("<LT_{bin}>"),
        }
    }
}

pub(super) fn render_layout(script: &ArticulationScript, style: Style) -> String {
    let mut out = String::new();
    out.push_str(style.layout_start());
    out.push('\n');
    for (i, b) in script.boxes.iter().enumerate() {
        let _ = writeln!(
            out,
            "bbox_{i}=BBox({},{},{},{},{},{})",
            style.pos(b.min_bins[0]),
            style.pos(b.min_bins[1]),
            style.pos(b.min_bins[2]),
            style.pos(b.max_bins[0]),
            style.pos(b.max_bins[1]),
            style.pos(b.max_bins[2]),
        );
    }
    out.push_str(style.layout_end());
    out.push('\n');
    out
}

fn render_joint(out: &mut String, i: usize, j: &QuantJoint, style: Style) {
    let origin = |j: &QuantJoint| {
        let o = j.origin_bins.expect("origin-carrying joint");
        format!("[{},{},{}]", style.pos(o[0]), style.pos(o[1]), style.pos(o[2]))
    };
    match j.kind {
        JointKind::Revolute => {
            let l = j.limit_bins.expect("revolute limit");
            let _ = writeln!(
                out,
                "joint_{i}=RevoluteJoint({},{},{},{},[{},{}])",
                j.parent,
                j.child,
                style.dir(j.axis_code),
                origin(j),
                style.rot(l[0]),
                style.rot(l[1]),
            );
        }
        JointKind::Continuous => {
            let _ = writeln!(
                out,
                "joint_{i}=ContinuousJoint({},{},{},{})",
                j.parent,
                j.child,
                style.dir(j.axis_code),
                origin(j),
            );
        }
        JointKind::Screw => {
            let l = j.limit_bins.expect("screw limit");
            let _ = writeln!(
                out,
                "joint_{i}=ScrewJoint({},{},{},{},[{},{}])",
                j.parent,
                j.child,
                style.dir(j.axis_code),
                origin(j),
                style.trans(l[0]),
                style.trans(l[1]),
            );
        }
        JointKind::Prismatic => {
            let l = j.limit_bins.expect("prismatic limit");
            let _ = writeln!(
                out,
                "joint_{i}=PrismaticJoint({},{},{},[{},{}])",
                j.parent,
                j.child,
                style.dir(j.axis_code),
                style.trans(l[0]),
                style.trans(l[1]),
            );
        }
        JointKind::Fixed => unreachable!("fixed joints never appear in scripts"),
    }
}

pub(super) fn render_articulation(script: &ArticulationScript, style: Style) -> String {
    let mut out = String::new();
    out.push_str(style.art_start());
    out.push('\n');
    for (i, j) in script.joints.iter().enumerate() {
        render_joint(&mut out, i, j, style);
    }
    out.push_str(style.art_end());
    out.push('\n');
    out
}

pub(super) fn render(script: &ArticulationScript, style: Style) -> String {
    let mut out = render_layout(script, style);
    out.push_str(&render_articulation(script, style));
    out
}
