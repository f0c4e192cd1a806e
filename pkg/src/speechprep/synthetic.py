"""Deterministic synthetic multilingual corpus for smoke runs and tests."""

from __future__ import annotations

import random

from speechprep.models.manifest import Sentence, Utterance
from speechprep.models.tags import LanguageTag

SPACE_FREE = {"zh", "ja", "th"}

WORDS: dict[str, list[str]] = {
    "zh": "今天 天气 很好 我们 一起 学习 语音 识别 数据 北京 朋友".split(),
    "ja": "今日 は 天気 が いい です 音声 認識 東京 友達 時間".split(),
    "th": "สวัสดี วันนี้ อากาศ ดี มาก เรา ไป ตลาด เพื่อน".split(),
    "ru": "привет сегодня погода хорошая мы идём домой город время".split(),
    "ko": "안녕하세요 오늘 날씨 좋아요 우리 학교 시간 친구".split(),
    "vi": "xin chào hôm nay trời đẹp chúng tôi đi học".split(),
    "id": "selamat pagi hari ini cuaca bagus kami pergi pasar".split(),
    "ar": "مرحبا اليوم الطقس جميل نحن نذهب إلى المدرسة".split(),
}

TAGS = [
    LanguageTag(language="zh", region="CN"),
    LanguageTag(language="zh", region="WENZHOU"),
    LanguageTag(language="ja", region="JP"),
    LanguageTag(language="th", region="TH"),
    LanguageTag(language="ru", region="RU"),
    LanguageTag(language="ko", region="KR"),
    LanguageTag(language="vi", region="VN"),
    LanguageTag(language="id", region="ID"),
    LanguageTag(language="ar", region="SA"),
]

LONG_EVERY = 25
FAST_EVERY = 40


def _sentence_text(rng: random.Random, language: str, target_chars: float, punct: bool) -> str:
    sep = "" if language in SPACE_FREE else " "
    words = [rng.choice(WORDS[language])]
    while len(sep.join(words)) < target_chars:
        words.append(rng.choice(WORDS[language]))
    text = sep.join(words)
    if punct:
        text += "。" if language in {"zh", "ja"} else "."
    return text


def _utterance(rng: random.Random, index: int) -> Utterance:
    tag = TAGS[index % len(TAGS)]
    punct = rng.random() < 0.5
    if index % FAST_EVERY == FAST_EVERY - 1:
        n_sentences, rate, shortest = 1, 90.0, 1.0
    elif index % LONG_EVERY == LONG_EVERY - 1:
        n_sentences, rate, shortest = rng.randint(16, 20), rng.uniform(3.0, 8.0), 2.0
    else:
        n_sentences, rate, shortest = rng.randint(1, 3), rng.uniform(3.0, 8.0), 1.0

    sentences = []
    t = round(rng.uniform(0.0, 0.4), 2)
    for _ in range(n_sentences):
        span = round(rng.uniform(shortest, 4.0), 2)
        end = round(t + span, 2)
        text = _sentence_text(rng, tag.language, rate * span, punct)
        sentences.append(Sentence(start_s=t, end_s=end, text=text))
        t = round(end + rng.uniform(0.1, 0.5), 2)

    return Utterance(
        id=f"syn-{index:05d}",
        audio_path=f"synthetic/{tag.hyphenated}/syn-{index:05d}.wav",
        duration_s=round(t + 0.2, 2),
        tag=tag,
        sentences=sentences,
        punctuated=punct,
        itn=False,
        dataset="synthetic",
    )


def generate_corpus(n: int = 200, seed: int = 17) -> list[Utterance]:
    """Build ``n`` utterances across several languages.

    Every 25th utterance is longer than 30 s and needs segmentation; every
    40th speaks implausibly fast and fails the text-rate filter.
    """
    rng = random.Random(seed)
    return [_utterance(rng, i) for i in range(n)]
