import pytest
import torch

# Small parallel fixture corpus; line i of both lists is "the same sentence".
SENTENCES_EN = [
    "the cat sits on the mat",
    "rivers flow toward the sea",
    "children play in the garden",
    "old books smell of dust",
    "the train leaves at dawn",
    "bread bakes in the oven",
]
SENTENCES_DE = [
    "die katze sitzt auf der matte",
    "fluesse fliessen zum meer",
    "kinder spielen im garten",
    "alte buecher riechen nach staub",
    "der zug faehrt im morgengrauen ab",
    "brot backt im ofen",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A tiny GPT-2-architecture causal LM with a freshly trained BPE
    tokenizer, saved to disk and loaded by path like any hub model."""
    from tokenizers import Tokenizer, models, pre_tokenizers, trainers
    from transformers import GPT2Config, GPT2LMHeadModel, PreTrainedTokenizerFast

    directory = tmp_path_factory.mktemp("tiny-model")

    tokenizer = Tokenizer(models.BPE(unk_token="<unk>"))
    tokenizer.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.BpeTrainer(vocab_size=300, special_tokens=["<unk>", "<eos>"])
    tokenizer.train_from_iterator(SENTENCES_EN + SENTENCES_DE, trainer=trainer)
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tokenizer, unk_token="<unk>", eos_token="<eos>"
    )
    fast.save_pretrained(directory)

    torch.manual_seed(0)
    config = GPT2Config(
        vocab_size=fast.vocab_size,
        n_positions=64,
        n_embd=16,
        n_layer=2,
        n_head=2,
        eos_token_id=fast.eos_token_id,
        bos_token_id=fast.eos_token_id,
    )
    GPT2LMHeadModel(config).save_pretrained(directory)
    return str(directory)


@pytest.fixture
def corpus_dir(tmp_path):
    directory = tmp_path / "corpus"
    directory.mkdir()
    (directory / "eng_Latn.txt").write_text("\n".join(SENTENCES_EN) + "\n")
    (directory / "deu_Latn.txt").write_text("\n".join(SENTENCES_DE) + "\n")
    return directory
