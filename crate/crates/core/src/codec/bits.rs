//! MSB-first bit packing.

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_count: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `len` bits of `value`, most significant first.
    pub fn write(&mut self, value: u64, len: u8) {
        for i in (0..len).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    pub fn push(&mut self, bit: bool) {
        let offset = (self.bit_count % 8) as u8;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> offset;
        }
        self.bit_count += 1;
    }

    pub fn bit_count(&self) -> u64 {
        self.bit_count
    }

    pub fn finish(self) -> (Vec<u8>, u64) {
        (self.bytes, self.bit_count)
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
    end: u64,
}

impl<'a> BitReader<'a> {
    /// Reads at most `bit_count` bits of `bytes`.
    pub fn new(bytes: &'a [u8], bit_count: u64) -> Self {
        let end = bit_count.min(bytes.len() as u64 * 8);
        Self { bytes, pos: 0, end }
    }

    pub fn remaining(&self) -> u64 {
        self.end - self.pos
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        if self.pos >= self.end {
            return None;
        }
        let byte = self.bytes[(self.pos / 8) as usize];
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Some(bit)
    }

    pub fn read_bits(&mut self, len: u8) -> Option<u64> {
        if self.remaining() < len as u64 {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..len {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn packs_msb_first() {
        let mut w = BitWriter::new();
        w.write(0b101, 3);
        let (bytes, n) = w.finish();
        assert_eq!(bytes, vec![0b1010_0000]);
        assert_eq!(n, 3);

        let mut w = BitWriter::new();
        w.write(0b111, 3);
        w.write(0x41, 21);
        let (bytes, n) = w.finish();
        assert_eq!(n, 24);
        assert_eq!(bytes, vec![0b1110_0000, 0b0000_0000, 0b0100_0001]);
    }

    #[test]
    fn reader_stops_at_bit_count() {
        let mut r = BitReader::new(&[0xff], 3);
        assert_eq!(r.read_bits(2), Some(0b11));
        assert_eq!(r.read_bits(2), None);
        assert_eq!(r.read_bit(), Some(true));
        assert_eq!(r.read_bit(), None);
        assert_eq!(BitReader::new(&[], 100).remaining(), 0);
    }

    proptest! {
        #[test]
        fn writer_reader_agree(fields in proptest::collection::vec((any::<u64>(), 1u8..=64), 0..40)) {
            let mut w = BitWriter::new();
            for &(v, len) in &fields {
                w.write(v, len);
            }
            let (bytes, n) = w.finish();
            prop_assert_eq!(bytes.len() as u64, n.div_ceil(8));
            let mut r = BitReader::new(&bytes, n);
            for &(v, len) in &fields {
                let mask = if len == 64 { u64::MAX } else { (1 << len) - 1 };
                prop_assert_eq!(r.read_bits(len), Some(v & mask));
            }
            prop_assert_eq!(r.remaining(), 0);
        }
    }
}
