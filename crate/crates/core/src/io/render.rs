use crate::ir::Circuit;

/// Glyph set for [`render_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderStyle {
    #[default]
    Unicode,
    Ascii,
}

struct Glyphs {
    positive: char,
    negative: char,
    target: char,
    wire: char,
    vertical: char,
}

impl RenderStyle {
    fn glyphs(self) -> Glyphs {
        match self {
            RenderStyle::Unicode => Glyphs { positive: '●', negative: '○', target: '⊕', wire: '─', vertical: '│' },
            RenderStyle::Ascii => Glyphs { positive: '*', negative: 'o', target: '+', wire: '-', vertical: '|' },
        }
    }
}

/// One row per line, one column per gate, box-drawing glyphs.
pub fn render_ascii(c: &Circuit) -> String {
    render_with(c, RenderStyle::Unicode)
}

pub fn render_with(c: &Circuit, style: RenderStyle) -> String {
    let gl = style.glyphs();
    let label_width = format!("q{}", c.width()).len();
    let mut rows: Vec<String> =
        (1..=c.width()).map(|l| format!("{:<label_width$} {}", format!("q{l}"), gl.wire)).collect();
    for g in c.gates() {
        let lo = g.support_mask().trailing_zeros() as usize + 1;
        let hi = 64 - g.support_mask().leading_zeros() as usize;
        for (k, row) in rows.iter_mut().enumerate() {
            let l = k + 1;
            let cell = match g.polarity(l) {
                Some(true) => gl.positive,
                Some(false) => gl.negative,
                None if l == g.target() => gl.target,
                None if l > lo && l < hi => gl.vertical,
                None => gl.wire,
            };
            row.push(cell);
            row.push(gl.wire);
        }
    }
    let mut out = rows.join("\n");
    out.push('\n');
    out
}
