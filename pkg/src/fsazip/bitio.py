"""Bit-granular append/read buffer, MSB-first."""

from __future__ import annotations


class TruncatedStream(ValueError):
    """Raised when a read runs past the last written bit."""


class BitStream:
    """Append-only bit buffer with an independent read cursor.

    Bits are packed high-bit-first into ``bytearray`` storage; the last byte
    is zero-padded. ``bit_len`` is authoritative, not ``len(data)``.
    """

    __slots__ = ("_buf", "_acc", "_nacc", "read_pos")

    def __init__(self, data: bytes = b"", bit_len: int | None = None):
        if bit_len is None:
            bit_len = 8 * len(data)
        if bit_len > 8 * len(data) or bit_len < 0:
            raise ValueError("bit_len exceeds buffer size")
        nfull, rem = divmod(bit_len, 8)
        self._buf = bytearray(data[:nfull])
        # pending bits not yet flushed into _buf
        self._nacc = rem
        self._acc = data[nfull] >> (8 - rem) if rem else 0
        self.read_pos = 0

    @property
    def bit_len(self) -> int:
        return 8 * len(self._buf) + self._nacc

    def __len__(self) -> int:
        return self.bit_len

    def remaining(self) -> int:
        return self.bit_len - self.read_pos

    def write_bits(self, value: int, width: int) -> BitStream:
        if width < 0 or value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        if width == 0:
            return self
        acc = (self._acc << width) | value
        n = self._nacc + width
        if n >= 8:
            extra = n & 7
            self._buf += (acc >> extra).to_bytes(n >> 3, "big")
            acc &= (1 << extra) - 1
            n = extra
        self._acc = acc
        self._nacc = n
        return self

    def write_bit(self, bit: int) -> BitStream:
        return self.write_bits(bit, 1)

    def extend(self, other: BitStream) -> BitStream:
        """Append all bits of ``other`` (its read cursor is ignored)."""
        data = other._buf
        if self._nacc == 0:
            self._buf += data
        elif data:
            self.write_bits(int.from_bytes(data, "big"), 8 * len(data))
        return self.write_bits(other._acc, other._nacc)

    def read_bits(self, width: int) -> int:
        if width == 0:
            return 0
        pos = self.read_pos
        end = pos + width
        if end > self.bit_len:
            raise TruncatedStream(
                f"read of {width} bits at {pos} past end ({self.bit_len})"
            )
        self.read_pos = end
        nbuf = 8 * len(self._buf)
        if end <= nbuf:
            first = pos >> 3
            last = (end + 7) >> 3
            chunk = int.from_bytes(self._buf[first:last], "big")
            chunk >>= 8 * last - end
            return chunk & ((1 << width) - 1)
        # the read touches the unflushed tail
        full = self.to_bytes()
        first = pos >> 3
        last = (end + 7) >> 3
        chunk = int.from_bytes(full[first:last], "big") >> (8 * last - end)
        return chunk & ((1 << width) - 1)

    def read_bit(self) -> int:
        return self.read_bits(1)

    def count_zeros(self) -> int:
        """Consume zero bits up to and including the next 1; return the count."""
        zeros = 0
        while not self.read_bits(1):
            zeros += 1
        return zeros

    def seek(self, pos: int) -> None:
        if not 0 <= pos <= self.bit_len:
            raise ValueError("seek out of range")
        self.read_pos = pos

    def to_bytes(self) -> bytes:
        if self._nacc:
            return bytes(self._buf) + bytes([self._acc << (8 - self._nacc)])
        return bytes(self._buf)

    def to_bitstring(self) -> str:
        """Debug helper: the written bits as a '0'/'1' string."""
        n = self.bit_len
        if n == 0:
            return ""
        return format(int.from_bytes(self.to_bytes(), "big") >> (-n % 8), f"0{n}b")

    @classmethod
    def from_bitstring(cls, bits: str) -> BitStream:
        s = cls()
        bits = bits.replace(" ", "")
        if bits:
            s.write_bits(int(bits, 2), len(bits))
        return s

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitStream):
            return NotImplemented
        return self.bit_len == other.bit_len and self.to_bytes() == other.to_bytes()

    def __repr__(self) -> str:
        return f"BitStream(bit_len={self.bit_len}, read_pos={self.read_pos})"
