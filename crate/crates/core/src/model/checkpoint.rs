//! Self-describing binary checkpoints.
//!
//! Byte layout (all integers and floats little-endian):
//!
//! ```text
//! magic               8 bytes  "SSKMODEL"
//! format version      u32      currently 1
//! model kind          u8       0 = mean-logistic, 1 = cnn, 2 = lstm
//! representation mode u8       0 = unmodified, 1 = masked,
//!                              2 = masked-embed, 3 = tagged
//! embed_dim           u32
//! skill_dim           u32      0 unless mode is masked-embed
//! hidden_size         u32
//! max_doc_len         u32
//! filters_per_width   u32
//! filter width count  u32, then that many u32 widths
//! learning_rate       f64
//! batch_size          u32
//! max_epochs          u32
//! patience            u32
//! seed                u64
//! dropout override    u8 flag, then f64 (meaningful iff flag == 1)
//! provenance          u32 byte length, then UTF-8 JSON
//! vocabulary          u32 word count, then per word u32 byte length + UTF-8
//! tensors             u32 count, then per tensor:
//!                       u32 name length + UTF-8 name,
//!                       u32 rows, u32 cols, u32 frozen_rows,
//!                       rows*cols f64 values
//! ```
//!
//! Tensors appear in a fixed per-architecture order; names and shapes are
//! validated on load, so `load(save(m))` reproduces forward outputs
//! bit-exactly and corrupt or truncated files fail without producing a
//! partial model.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::model::cnn::{CnnNet, ConvBank};
use crate::model::logistic::LogisticNet;
use crate::model::lstm::{Gate, LstmNet, GATE_NAMES};
use crate::model::net::{Dense, Net};
use crate::model::tensor::Tensor;
use crate::model::vocab::Vocab;
use crate::model::{ClassifierModel, ModelKind, TrainConfig};
use crate::records::Meta;
use crate::represent::RepresentationMode;
use crate::Result;

const MAGIC: &[u8; 8] = b"SSKMODEL";
const FORMAT_VERSION: u32 = 1;

fn kind_code(kind: ModelKind) -> u8 {
    match kind {
        ModelKind::MeanLogistic => 0,
        ModelKind::Cnn => 1,
        ModelKind::Lstm => 2,
    }
}

fn kind_from_code(code: u8) -> Result<ModelKind> {
    match code {
        0 => Ok(ModelKind::MeanLogistic),
        1 => Ok(ModelKind::Cnn),
        2 => Ok(ModelKind::Lstm),
        other => Err(Error::Checkpoint(format!("unknown model kind code {other}"))),
    }
}

fn mode_code(mode: RepresentationMode) -> u8 {
    match mode {
        RepresentationMode::Unmodified => 0,
        RepresentationMode::Masked => 1,
        RepresentationMode::MaskedWithEmbedding => 2,
        RepresentationMode::Tagged => 3,
    }
}

fn mode_from_code(code: u8) -> Result<RepresentationMode> {
    match code {
        0 => Ok(RepresentationMode::Unmodified),
        1 => Ok(RepresentationMode::Masked),
        2 => Ok(RepresentationMode::MaskedWithEmbedding),
        3 => Ok(RepresentationMode::Tagged),
        other => Err(Error::Checkpoint(format!("unknown mode code {other}"))),
    }
}

struct Writer<W: Write> {
    out: W,
}

impl<W: Write> Writer<W> {
    fn u8(&mut self, v: u8) -> std::io::Result<()> {
        self.out.write_all(&[v])
    }
    fn u32(&mut self, v: u32) -> std::io::Result<()> {
        self.out.write_all(&v.to_le_bytes())
    }
    fn u64(&mut self, v: u64) -> std::io::Result<()> {
        self.out.write_all(&v.to_le_bytes())
    }
    fn f64(&mut self, v: f64) -> std::io::Result<()> {
        self.out.write_all(&v.to_le_bytes())
    }
    fn str(&mut self, s: &str) -> std::io::Result<()> {
        self.u32(s.len() as u32)?;
        self.out.write_all(s.as_bytes())
    }
    fn tensor(&mut self, t: &Tensor) -> std::io::Result<()> {
        self.str(&t.name)?;
        self.u32(t.rows as u32)?;
        self.u32(t.cols as u32)?;
        self.u32(t.frozen_rows as u32)?;
        for v in &t.data {
            self.f64(*v)?;
        }
        Ok(())
    }
}

struct Reader<R: Read> {
    input: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.input
            .read_exact(&mut buf)
            .map_err(|_| Error::Checkpoint("truncated checkpoint".into()))?;
        Ok(buf)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes::<1>()?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes()?))
    }
    fn str(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        if len > 1 << 20 {
            return Err(Error::Checkpoint(format!("implausible string length {len}")));
        }
        let mut buf = vec![0u8; len];
        self.input
            .read_exact(&mut buf)
            .map_err(|_| Error::Checkpoint("truncated checkpoint".into()))?;
        String::from_utf8(buf).map_err(|_| Error::Checkpoint("invalid UTF-8".into()))
    }
    fn tensor(&mut self) -> Result<Tensor> {
        let name = self.str()?;
        let rows = self.u32()? as usize;
        let cols = self.u32()? as usize;
        let frozen_rows = self.u32()? as usize;
        if rows.checked_mul(cols).is_none_or(|n| n > 1 << 28) {
            return Err(Error::Checkpoint(format!(
                "implausible tensor shape {rows}x{cols}"
            )));
        }
        let mut data = vec![0.0; rows * cols];
        for v in &mut data {
            *v = self.f64()?;
        }
        Ok(Tensor {
            name,
            rows,
            cols,
            grad: vec![0.0; data.len()],
            data,
            frozen_rows,
        })
    }
}

/// Writes a checkpoint. `meta` carries run provenance (seed, config hash)
/// and is stored verbatim.
pub fn save_model(model: &ClassifierModel, path: &Path, meta: Option<&Meta>) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = Writer {
        out: std::io::BufWriter::new(file),
    };
    let config = model.config();
    let write = |w: &mut Writer<std::io::BufWriter<std::fs::File>>| -> std::io::Result<()> {
        w.out.write_all(MAGIC)?;
        w.u32(FORMAT_VERSION)?;
        w.u8(kind_code(config.model_kind))?;
        w.u8(mode_code(config.mode))?;
        w.u32(model.embed_dim() as u32)?;
        w.u32(model.skill_dim() as u32)?;
        w.u32(config.hidden_size as u32)?;
        w.u32(config.max_doc_len as u32)?;
        w.u32(config.filters_per_width as u32)?;
        w.u32(config.filter_widths.len() as u32)?;
        for &width in &config.filter_widths {
            w.u32(width as u32)?;
        }
        w.f64(config.learning_rate)?;
        w.u32(config.batch_size as u32)?;
        w.u32(config.max_epochs as u32)?;
        w.u32(config.patience as u32)?;
        w.u64(config.seed)?;
        w.u8(config.dropout.is_some() as u8)?;
        w.f64(config.dropout.unwrap_or(0.0))?;
        let provenance = match meta {
            Some(meta) => serde_json::to_string(meta).expect("meta serializes"),
            None => String::new(),
        };
        w.str(&provenance)?;
        let words = model.vocab.words();
        w.u32(words.len() as u32)?;
        for word in words {
            w.str(word)?;
        }
        let tensors = model.net.tensors();
        w.u32(tensors.len() as u32)?;
        for tensor in tensors {
            w.tensor(tensor)?;
        }
        w.out.flush()
    };
    write(&mut w).map_err(|e| Error::io(path, e))
}

/// Reads a checkpoint back, validating the header, tensor names, and
/// shapes. Returns the model and its stored provenance.
pub fn load_model(path: &Path) -> Result<(ClassifierModel, Meta)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = Reader {
        input: std::io::BufReader::new(file),
    };
    let magic = r.bytes::<8>()?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint("not a checkpoint file (bad magic)".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    let kind = kind_from_code(r.u8()?)?;
    let mode = mode_from_code(r.u8()?)?;
    let embed_dim = r.u32()? as usize;
    let skill_dim = r.u32()? as usize;
    let hidden_size = r.u32()? as usize;
    let max_doc_len = r.u32()? as usize;
    let filters_per_width = r.u32()? as usize;
    let width_count = r.u32()? as usize;
    if width_count > 64 {
        return Err(Error::Checkpoint(format!("implausible width count {width_count}")));
    }
    let mut filter_widths = Vec::with_capacity(width_count);
    for _ in 0..width_count {
        filter_widths.push(r.u32()? as usize);
    }
    let learning_rate = r.f64()?;
    let batch_size = r.u32()? as usize;
    let max_epochs = r.u32()? as usize;
    let patience = r.u32()? as usize;
    let seed = r.u64()?;
    let dropout_set = r.u8()? == 1;
    let dropout_value = r.f64()?;
    let provenance = r.str()?;
    let meta: Meta = if provenance.is_empty() {
        Meta::default()
    } else {
        serde_json::from_str(&provenance)
            .map_err(|e| Error::Checkpoint(format!("bad provenance: {e}")))?
    };
    let word_count = r.u32()? as usize;
    if word_count > 1 << 24 {
        return Err(Error::Checkpoint(format!("implausible vocab size {word_count}")));
    }
    let mut words = Vec::with_capacity(word_count);
    for _ in 0..word_count {
        words.push(r.str()?);
    }
    let tensor_count = r.u32()? as usize;
    if tensor_count > 1 << 10 {
        return Err(Error::Checkpoint(format!("implausible tensor count {tensor_count}")));
    }
    let mut tensors = std::collections::VecDeque::with_capacity(tensor_count);
    for _ in 0..tensor_count {
        tensors.push_back(r.tensor()?);
    }

    let config = TrainConfig {
        model_kind: kind,
        mode,
        learning_rate,
        batch_size,
        max_epochs,
        patience,
        seed,
        dropout: dropout_set.then_some(dropout_value),
        max_doc_len,
        hidden_size,
        filter_widths,
        filters_per_width,
    };
    let vocab = Vocab::from_words(words);
    let net = rebuild_net(&config, vocab.len(), embed_dim, skill_dim, &mut tensors)?;
    if !tensors.is_empty() {
        return Err(Error::Checkpoint("trailing tensors in checkpoint".into()));
    }
    Ok((
        ClassifierModel {
            config,
            vocab,
            net,
        },
        meta,
    ))
}

fn take_tensor(
    tensors: &mut std::collections::VecDeque<Tensor>,
    name: &str,
    rows: usize,
    cols: usize,
) -> Result<Tensor> {
    let tensor = tensors
        .pop_front()
        .ok_or_else(|| Error::Checkpoint(format!("missing tensor `{name}`")))?;
    if tensor.name != name || tensor.rows != rows || tensor.cols != cols {
        return Err(Error::Checkpoint(format!(
            "expected tensor `{name}` of shape {rows}x{cols}, found `{}` of shape {}x{}",
            tensor.name, tensor.rows, tensor.cols
        )));
    }
    Ok(tensor)
}

fn rebuild_net(
    config: &TrainConfig,
    vocab_len: usize,
    embed_dim: usize,
    skill_dim: usize,
    tensors: &mut std::collections::VecDeque<Tensor>,
) -> Result<Net> {
    let embedding = take_tensor(tensors, "embedding", vocab_len, embed_dim)?;
    match config.model_kind {
        ModelKind::MeanLogistic => {
            let dense = Dense {
                w: take_tensor(tensors, "dense.w", 2, embed_dim + skill_dim)?,
                b: take_tensor(tensors, "dense.b", 2, 1)?,
            };
            Ok(Net::Logistic(LogisticNet {
                embedding,
                dense,
                embed_dim,
                skill_dim,
            }))
        }
        ModelKind::Cnn => {
            let mut banks = Vec::with_capacity(config.filter_widths.len());
            for &width in &config.filter_widths {
                banks.push(ConvBank {
                    width,
                    filters: take_tensor(
                        tensors,
                        &format!("conv{width}.w"),
                        config.filters_per_width,
                        width * embed_dim,
                    )?,
                    bias: take_tensor(
                        tensors,
                        &format!("conv{width}.b"),
                        config.filters_per_width,
                        1,
                    )?,
                });
            }
            let pooled: usize = banks.iter().map(|b| b.filters.rows).sum();
            let dense = Dense {
                w: take_tensor(tensors, "dense.w", 2, pooled + skill_dim)?,
                b: take_tensor(tensors, "dense.b", 2, 1)?,
            };
            Ok(Net::Cnn(CnnNet {
                embedding,
                banks,
                dense,
                embed_dim,
                skill_dim,
                max_doc_len: config.max_doc_len,
            }))
        }
        ModelKind::Lstm => {
            let hidden = config.hidden_size;
            let mut gates = Vec::with_capacity(4);
            for name in GATE_NAMES {
                gates.push(Gate {
                    wx: take_tensor(tensors, &format!("lstm.{name}.wx"), hidden, embed_dim)?,
                    wh: take_tensor(tensors, &format!("lstm.{name}.wh"), hidden, hidden)?,
                    b: take_tensor(tensors, &format!("lstm.{name}.b"), hidden, 1)?,
                });
            }
            let gates: [Gate; 4] = gates.try_into().expect("exactly four gates");
            let dense = Dense {
                w: take_tensor(tensors, "dense.w", 2, hidden + skill_dim)?,
                b: take_tensor(tensors, "dense.b", 2, 1)?,
            };
            Ok(Net::Lstm(LstmNet {
                embedding,
                gates,
                dense,
                embed_dim,
                hidden,
                skill_dim,
            }))
        }
    }
}
