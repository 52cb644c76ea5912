//! Decorative SVG rendering of a wall in the upper half plane. This is
//! the one place floating point appears: it draws pictures, it decides
//! nothing.

use tiltwall::tilt::WallLocus;

fn to_f64(x: &tiltwall::Rational) -> f64 {
    let n: f64 = x.numer().to_string().parse().unwrap_or(0.0);
    let d: f64 = x.denom().to_string().parse().unwrap_or(1.0);
    n / d
}

pub fn render_wall(wall: &WallLocus) -> String {
    let (min_x, max_x, max_y, body) = match wall {
        WallLocus::Circle { center, radius_sq } => {
            let c = to_f64(center);
            let r = to_f64(radius_sq).max(0.0).sqrt();
            let body = format!(
                r##"<path d="M {} 0 A {r} {r} 0 0 1 {} 0" fill="none" stroke="#1f6feb" stroke-width="0.01"/>"##,
                c - r,
                c + r
            );
            (c - 1.5 * r, c + 1.5 * r, 1.2 * r, body)
        }
        WallLocus::Vertical { beta } => {
            let b = to_f64(beta);
            let body = format!(
                r##"<line x1="{b}" y1="0" x2="{b}" y2="1" stroke="#1f6feb" stroke-width="0.01"/>"##
            );
            (b - 1.0, b + 1.0, 1.0, body)
        }
        WallLocus::Everywhere | WallLocus::Empty { .. } => {
            let label = wall.to_string();
            let body = format!(r#"<text x="-0.9" y="-0.5" font-size="0.12">{label}</text>"#);
            (-1.0, 1.0, 1.0, body)
        }
    };
    let width = max_x - min_x;
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
            r#"<g transform="scale(1,-1)">"#,
            r##"<line x1="{}" y1="0" x2="{}" y2="0" stroke="#999" stroke-width="0.005"/>"##,
            "{}</g></svg>\n"
        ),
        min_x,
        -max_y,
        width,
        max_y * 1.1,
        min_x,
        max_x,
        body
    )
}
