//! PLY point clouds.
//!
//! Writes `x y z` (double), `nx ny nz` (double) when normals are present,
//! `objectness` (uchar) and `object_id` (int) when object ids are present,
//! then every named scalar channel (double) in name order. Reads ASCII and
//! binary files of either endianness; elements other than `vertex` and
//! unknown list properties are skipped.

use std::io::{BufRead, Write};
use std::path::Path;

use graspness_core::{PointCloud, Vec3};

use crate::error::{io_error, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlyFormat {
    #[default]
    BinaryLittleEndian,
    Ascii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return Err(bad(format!("unknown property type `{s}`"))),
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar(String, Scalar),
    List(Scalar, Scalar),
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Ascii,
    Little,
    Big,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::input(format!("malformed PLY: {}", msg.into()))
}

pub fn write_ply<W: Write>(mut w: W, cloud: &PointCloud, format: PlyFormat) -> std::io::Result<()> {
    let objectness = cloud.object_ids.as_ref().map(|_| cloud.objectness());
    let mut header = String::from("ply\n");
    header += match format {
        PlyFormat::BinaryLittleEndian => "format binary_little_endian 1.0\n",
        PlyFormat::Ascii => "format ascii 1.0\n",
    };
    header += &format!("element vertex {}\n", cloud.len());
    let mut names: Vec<&str> = vec!["x", "y", "z"];
    if cloud.normals.is_some() {
        names.extend(["nx", "ny", "nz"]);
    }
    for n in &names {
        header += &format!("property double {n}\n");
    }
    if cloud.object_ids.is_some() {
        header += "property uchar objectness\nproperty int object_id\n";
    }
    for name in cloud.scalars.keys() {
        header += &format!("property double {name}\n");
    }
    header += "end_header\n";
    w.write_all(header.as_bytes())?;

    for i in 0..cloud.len() {
        let mut doubles: Vec<f64> = cloud.positions[i].iter().copied().collect();
        if let Some(n) = &cloud.normals {
            doubles.extend(n[i].iter());
        }
        let tail: Vec<f64> = cloud.scalars.values().map(|v| v[i]).collect();
        match format {
            PlyFormat::BinaryLittleEndian => {
                for d in &doubles {
                    w.write_all(&d.to_le_bytes())?;
                }
                if let (Some(ids), Some(obj)) = (&cloud.object_ids, &objectness) {
                    w.write_all(&[obj[i]])?;
                    w.write_all(&ids[i].to_le_bytes())?;
                }
                for d in &tail {
                    w.write_all(&d.to_le_bytes())?;
                }
            }
            PlyFormat::Ascii => {
                let mut fields: Vec<String> = doubles.iter().map(|d| d.to_string()).collect();
                if let (Some(ids), Some(obj)) = (&cloud.object_ids, &objectness) {
                    fields.push(obj[i].to_string());
                    fields.push(ids[i].to_string());
                }
                fields.extend(tail.iter().map(|d| d.to_string()));
                writeln!(w, "{}", fields.join(" "))?;
            }
        }
    }
    w.flush()
}

pub fn write_ply_file(path: &Path, cloud: &PointCloud, format: PlyFormat) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
    write_ply(std::io::BufWriter::new(file), cloud, format).map_err(|e| io_error(path, e))
}

pub fn read_ply_file(path: &Path) -> Result<PointCloud> {
    let file = std::fs::File::open(path).map_err(|e| io_error(path, e))?;
    read_ply(std::io::BufReader::new(file)).map_err(|e| match e {
        CliError::Input(m) => CliError::input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn read_ply<R: BufRead>(mut r: R) -> Result<PointCloud> {
    let (encoding, elements) = read_header(&mut r)?;
    let mut body = Body::new(r, encoding);
    let mut cloud = None;
    for el in &elements {
        if el.name == "vertex" {
            cloud = Some(read_vertices(&mut body, el)?);
        } else {
            for _ in 0..el.count {
                for p in &el.properties {
                    match p {
                        Property::Scalar(_, t) => {
                            body.value(*t)?;
                        }
                        Property::List(c, t) => {
                            let n = list_len(body.value(*c)?)?;
                            for _ in 0..n {
                                body.value(*t)?;
                            }
                        }
                    }
                }
            }
        }
    }
    cloud.ok_or_else(|| bad("no vertex element"))
}

fn read_header<R: BufRead>(r: &mut R) -> Result<(Encoding, Vec<Element>)> {
    let mut line = String::new();
    let mut next = |line: &mut String| -> Result<()> {
        line.clear();
        let n = r.read_line(line).map_err(|e| bad(e.to_string()))?;
        if n == 0 {
            return Err(bad("unexpected end of header"));
        }
        Ok(())
    };
    next(&mut line)?;
    if line.trim_end() != "ply" {
        return Err(bad("missing `ply` magic"));
    }
    let mut encoding = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        next(&mut line)?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["end_header"] => break,
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["format", f, _] => {
                encoding = Some(match *f {
                    "ascii" => Encoding::Ascii,
                    "binary_little_endian" => Encoding::Little,
                    "binary_big_endian" => Encoding::Big,
                    _ => return Err(bad(format!("unknown format `{f}`"))),
                })
            }
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count.parse().map_err(|_| bad("bad element count"))?,
                properties: Vec::new(),
            }),
            ["property", "list", c, t, _] => {
                let el = elements.last_mut().ok_or_else(|| bad("property before element"))?;
                el.properties.push(Property::List(Scalar::parse(c)?, Scalar::parse(t)?));
            }
            ["property", t, name] => {
                let el = elements.last_mut().ok_or_else(|| bad("property before element"))?;
                el.properties.push(Property::Scalar(name.to_string(), Scalar::parse(t)?));
            }
            _ => return Err(bad(format!("unexpected header line `{}`", line.trim_end()))),
        }
    }
    Ok((encoding.ok_or_else(|| bad("missing format line"))?, elements))
}

fn list_len(v: f64) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 {
        Ok(v as usize)
    } else {
        Err(bad("bad list length"))
    }
}

fn read_vertices<R: BufRead>(body: &mut Body<R>, el: &Element) -> Result<PointCloud> {
    let n = el.count;
    let names: Vec<Option<&str>> = el
        .properties
        .iter()
        .map(|p| match p {
            Property::Scalar(name, _) => Some(name.as_str()),
            Property::List(..) => None,
        })
        .collect();
    let has = |s: &str| names.contains(&Some(s));
    if !(has("x") && has("y") && has("z")) {
        return Err(bad("vertex element lacks x, y or z"));
    }
    let with_normals = has("nx") && has("ny") && has("nz");
    let with_ids = has("object_id");

    let mut positions = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(if with_normals { n } else { 0 });
    let mut ids = Vec::new();
    let mut scalars: Vec<(String, Vec<f64>)> = names
        .iter()
        .flatten()
        .filter(|s| !matches!(**s, "x" | "y" | "z" | "nx" | "ny" | "nz" | "objectness" | "object_id"))
        .map(|s| (s.to_string(), Vec::with_capacity(n)))
        .collect();

    for _ in 0..n {
        let (mut p, mut nrm, mut id) = (Vec3::zeros(), Vec3::zeros(), -1i32);
        for prop in &el.properties {
            match prop {
                Property::List(c, t) => {
                    let len = list_len(body.value(*c)?)?;
                    for _ in 0..len {
                        body.value(*t)?;
                    }
                }
                Property::Scalar(name, t) => {
                    let v = body.value(*t)?;
                    match name.as_str() {
                        "x" => p.x = v,
                        "y" => p.y = v,
                        "z" => p.z = v,
                        "nx" => nrm.x = v,
                        "ny" => nrm.y = v,
                        "nz" => nrm.z = v,
                        "objectness" => {}
                        "object_id" => id = v as i32,
                        other => {
                            scalars.iter_mut().find(|(s, _)| s == other).expect("listed").1.push(v);
                        }
                    }
                }
            }
        }
        positions.push(p);
        if with_normals {
            normals.push(nrm);
        }
        if with_ids {
            ids.push(id);
        }
    }

    let mut cloud = PointCloud::new(positions);
    if with_normals {
        cloud = cloud.with_normals(normals)?;
    }
    if with_ids {
        cloud = cloud.with_object_ids(ids)?;
    }
    for (name, values) in scalars {
        cloud.set_scalar(&name, values)?;
    }
    Ok(cloud)
}

struct Body<R> {
    r: R,
    encoding: Encoding,
    tokens: std::vec::IntoIter<String>,
}

impl<R: BufRead> Body<R> {
    fn new(r: R, encoding: Encoding) -> Self {
        Body { r, encoding, tokens: Vec::new().into_iter() }
    }

    fn value(&mut self, t: Scalar) -> Result<f64> {
        if self.encoding == Encoding::Ascii {
            let tok = self.token()?;
            return tok.parse::<f64>().map_err(|_| bad(format!("bad number `{tok}`")));
        }
        let mut buf = [0u8; 8];
        let b = &mut buf[..t.size()];
        self.r.read_exact(b).map_err(|_| bad("truncated binary data"))?;
        if self.encoding == Encoding::Big {
            b.reverse();
        }
        Ok(match t {
            Scalar::I8 => b[0] as i8 as f64,
            Scalar::U8 => b[0] as f64,
            Scalar::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::I32 => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::U32 => u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F32 => f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F64 => f64::from_le_bytes(buf),
        })
    }

    fn token(&mut self) -> Result<String> {
        loop {
            if let Some(t) = self.tokens.next() {
                return Ok(t);
            }
            let mut line = String::new();
            if self.r.read_line(&mut line).map_err(|e| bad(e.to_string()))? == 0 {
                return Err(bad("truncated ASCII data"));
            }
            self.tokens = line.split_whitespace().map(str::to_string).collect::<Vec<_>>().into_iter();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PointCloud {
        let mut c = PointCloud::new(vec![Vec3::new(0.1, -0.2, 0.3), Vec3::new(1e-9, 2.5, -7.0)])
            .with_normals(vec![Vec3::z(), Vec3::new(0.6, 0.8, 0.0)])
            .unwrap()
            .with_object_ids(vec![3, -1])
            .unwrap();
        c.set_scalar("graspness", vec![0.25, 1.0 / 3.0]).unwrap();
        c
    }

    #[test]
    fn round_trips_both_formats() {
        for format in [PlyFormat::BinaryLittleEndian, PlyFormat::Ascii] {
            let mut buf = Vec::new();
            write_ply(&mut buf, &sample(), format).unwrap();
            assert_eq!(read_ply(&buf[..]).unwrap(), sample());
        }
    }

    #[test]
    fn empty_cloud_has_valid_header() {
        let mut buf = Vec::new();
        write_ply(&mut buf, &PointCloud::new(vec![]), PlyFormat::BinaryLittleEndian).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("element vertex 0\n") && text.ends_with("end_header\n"));
        assert_eq!(read_ply(&buf[..]).unwrap().len(), 0);
    }

    #[test]
    fn reads_foreign_layouts() {
        let mut data = b"ply\nformat binary_big_endian 1.0\ncomment made elsewhere\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nproperty list uchar int idx\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n".to_vec();
        for v in [1.5f32, -2.0, 0.25] {
            data.extend(v.to_be_bytes());
        }
        data.push(1);
        data.extend(7i32.to_be_bytes());
        data.push(3);
        for i in [0i32, 0, 0] {
            data.extend(i.to_be_bytes());
        }
        let c = read_ply(&data[..]).unwrap();
        assert_eq!(c.positions, vec![Vec3::new(1.5, -2.0, 0.25)]);
        assert!(c.normals.is_none() && c.object_ids.is_none());
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_ply(&b"plx\n"[..]).is_err());
        assert!(read_ply(&b"ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nend_header\n1 2\n"[..]).is_err());
        assert!(read_ply(&b"ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nend_header\n1 2\n"[..]).is_err());
        let mut truncated = Vec::new();
        write_ply(&mut truncated, &sample(), PlyFormat::BinaryLittleEndian).unwrap();
        truncated.pop();
        assert!(read_ply(&truncated[..]).is_err());
    }
}
