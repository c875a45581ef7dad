"""Two-layer LSTM encoder/decoder with scaled multiplicative attention."""

from __future__ import annotations

import torch
from torch import nn

PAD, BOS, EOS, UNK = 0, 1, 2, 3


class ScaledMultiplicativeAttention(nn.Module):
    """Multiplicative score h_dec^T W h_enc with a learned scalar scale."""

    def __init__(self, hidden: int):
        super().__init__()
        self.linear = nn.Linear(hidden, hidden, bias=False)
        self.scale = nn.Parameter(torch.tensor(1.0))

    def forward(self, dec_states, enc_outputs, enc_mask):
        # dec_states: (batch, tgt_len, hidden); enc_outputs: (batch, src_len, hidden)
        scores = self.scale * torch.bmm(self.linear(dec_states), enc_outputs.transpose(1, 2))
        scores = scores.masked_fill(~enc_mask.unsqueeze(1), float("-inf"))
        weights = torch.softmax(scores, dim=-1)
        return torch.bmm(weights, enc_outputs)  # (batch, tgt_len, hidden)


class Seq2Seq(nn.Module):
    def __init__(
        self,
        src_vocab: int,
        tgt_vocab: int,
        hidden: int = 128,
        layers: int = 2,
        dropout: float = 0.2,
    ):
        super().__init__()
        self.src_embed = nn.Embedding(src_vocab, hidden, padding_idx=PAD)
        self.tgt_embed = nn.Embedding(tgt_vocab, hidden, padding_idx=PAD)
        self.encoder = nn.LSTM(
            hidden, hidden, num_layers=layers, batch_first=True, dropout=dropout
        )
        self.decoder = nn.LSTM(
            hidden, hidden, num_layers=layers, batch_first=True, dropout=dropout
        )
        self.attention = ScaledMultiplicativeAttention(hidden)
        self.combine = nn.Linear(2 * hidden, hidden)
        self.out = nn.Linear(hidden, tgt_vocab)
        self.dropout = nn.Dropout(dropout)

    def encode(self, src, src_lengths):
        embedded = self.dropout(self.src_embed(src))
        packed = nn.utils.rnn.pack_padded_sequence(
            embedded, src_lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        outputs, state = self.encoder(packed)
        outputs, _ = nn.utils.rnn.pad_packed_sequence(
            outputs, batch_first=True, total_length=src.size(1)
        )
        return outputs, state

    def decode_step(self, tokens, state, enc_outputs, enc_mask):
        embedded = self.dropout(self.tgt_embed(tokens))
        dec_out, state = self.decoder(embedded, state)
        context = self.attention(dec_out, enc_outputs, enc_mask)
        attentional = torch.tanh(self.combine(torch.cat([context, dec_out], dim=-1)))
        return self.out(self.dropout(attentional)), state

    def forward(self, src, src_lengths, tgt_in):
        enc_outputs, state = self.encode(src, src_lengths)
        enc_mask = src.ne(PAD)
        logits, _ = self.decode_step(tgt_in, state, enc_outputs, enc_mask)
        return logits

    @torch.no_grad()
    def greedy_decode(self, src, src_lengths, max_len: int):
        self.eval()
        batch = src.size(0)
        enc_outputs, state = self.encode(src, src_lengths)
        enc_mask = src.ne(PAD)
        tokens = torch.full((batch, 1), BOS, dtype=torch.long, device=src.device)
        finished = torch.zeros(batch, dtype=torch.bool, device=src.device)
        outputs = []
        for _ in range(max_len):
            logits, state = self.decode_step(tokens, state, enc_outputs, enc_mask)
            tokens = logits[:, -1].argmax(dim=-1, keepdim=True)
            tokens = tokens.masked_fill(finished.unsqueeze(1), PAD)
            outputs.append(tokens)
            finished |= tokens.squeeze(1).eq(EOS)
            if bool(finished.all()):
                break
        return torch.cat(outputs, dim=1) if outputs else torch.zeros(batch, 0, dtype=torch.long)
